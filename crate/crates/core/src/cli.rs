//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 bad input,
//! 3 a resource bound was hit.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{ArgGroup, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crate::config::Config;
use crate::element::Element;
use crate::error::Error;
use crate::frame::{classify, is_compact, CompactnessVerdict};
use crate::hasse::hasse_dot;
use crate::lu::{phi, verify_gamma, GammaCheck, LuSignature};
use crate::morphism::{coherence_equivalence, ProductHom};
use crate::nucleus::{classify_nucleus, nuclear_as_algebra, NucleusClassification, NucleusKind, NucleusSpec};
use crate::ring::{mv_check, radical_report, FiniteRing};
use crate::signature::Signature;

pub const EXIT_OK: u8 = 0;
pub const EXIT_PROPERTY_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "mvframe", version, about = "Frame-theoretic checks on complete MV-algebras")]
struct Cli {
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest carrier enumerated by brute force.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    bound: Option<u64>,
    /// Number of witness terms verified for non-compactness verdicts.
    #[arg(long, global = true, value_parser = parse_positive)]
    witness_prefix: Option<usize>,
    /// Print JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn parse_positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Algebraic, coherent, regular, FIP and powerset flags of a signature.
    Classify { spec: PathBuf },
    /// Compactness of an element, with a witness when it is not compact.
    Compact { spec: PathBuf, element: PathBuf },
    /// Classify a nucleus given by name (`ceiling`, `threshold:1/2`, …),
    /// inline JSON or a JSON file.
    Nucleus { spec: PathBuf, nucleus: String },
    /// Ideal lattice of a finite Łukasiewicz ring.
    #[command(group(ArgGroup::new("mode").required(true).args(["radical", "mv_check"])))]
    Ring {
        ring: PathBuf,
        /// The radical nucleus against its closed form.
        #[arg(long)]
        radical: bool,
        /// The MV-operations on ideals against the frame operations.
        #[arg(long)]
        mv_check: bool,
    },
    /// Unit interval of an lu-group signature.
    Gamma { spec: PathBuf },
    /// lu-group whose unit interval is the given signature.
    Phi { spec: PathBuf },
    /// DOT Hasse diagram of a finite algebra with at most 200 elements.
    Hasse { spec: PathBuf },
    /// Coherence of a product homomorphism against completeness and
    /// preservation of maximal compact elements.
    Hom { hom: PathBuf },
}

/// Inputs loaded during one invocation, keyed by name within each kind.
#[derive(Debug, Default)]
pub struct Workspace {
    pub config: Config,
    signatures: BTreeMap<String, Arc<Signature>>,
    lu_signatures: BTreeMap<String, Arc<LuSignature>>,
    rings: BTreeMap<String, FiniteRing>,
    homs: BTreeMap<String, ProductHom>,
    nuclei: BTreeMap<String, NucleusSpec>,
}

fn insert_unique<T>(map: &mut BTreeMap<String, T>, kind: &str, name: &str, v: T) -> Result<(), Error> {
    if map.contains_key(name) {
        return Err(Error::Parse(format!("{kind} {name:?} is already loaded")));
    }
    map.insert(name.to_string(), v);
    Ok(())
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn name_of(path: &Path) -> String {
    path.display().to_string()
}

impl Workspace {
    pub fn new(config: Config) -> Result<Self, Error> {
        if config.enumeration_bound == 0 || config.witness_prefix == 0 || config.samples == 0 {
            return Err(Error::BadParameter("configuration values must be positive".into()));
        }
        Ok(Self {
            config,
            ..Self::default()
        })
    }

    pub fn add_signature(&mut self, name: &str, sig: Signature) -> Result<Arc<Signature>, Error> {
        let sig = Arc::new(sig);
        insert_unique(&mut self.signatures, "signature", name, sig.clone())?;
        Ok(sig)
    }

    pub fn add_lu_signature(&mut self, name: &str, sig: LuSignature) -> Result<Arc<LuSignature>, Error> {
        let sig = Arc::new(sig);
        insert_unique(&mut self.lu_signatures, "lu-signature", name, sig.clone())?;
        Ok(sig)
    }

    pub fn add_ring(&mut self, name: &str, ring: FiniteRing) -> Result<(), Error> {
        insert_unique(&mut self.rings, "ring", name, ring)
    }

    pub fn add_hom(&mut self, name: &str, hom: ProductHom) -> Result<(), Error> {
        insert_unique(&mut self.homs, "homomorphism", name, hom)
    }

    pub fn add_nucleus(&mut self, nucleus: NucleusSpec) -> Result<(), Error> {
        let name = nucleus.name().to_string();
        insert_unique(&mut self.nuclei, "nucleus", &name, nucleus)
    }

    pub fn signature(&self, name: &str) -> Option<&Arc<Signature>> {
        self.signatures.get(name)
    }

    pub fn lu_signature(&self, name: &str) -> Option<&Arc<LuSignature>> {
        self.lu_signatures.get(name)
    }

    pub fn ring(&self, name: &str) -> Option<&FiniteRing> {
        self.rings.get(name)
    }

    pub fn hom(&self, name: &str) -> Option<&ProductHom> {
        self.homs.get(name)
    }

    pub fn nucleus(&self, name: &str) -> Option<&NucleusSpec> {
        self.nuclei.get(name)
    }

    fn load_signature(&mut self, path: &Path) -> Result<Arc<Signature>, Error> {
        let sig: Signature = serde_json::from_str(&read(path)?)?;
        self.add_signature(&name_of(path), sig)
    }

    fn load_lu_signature(&mut self, path: &Path) -> Result<Arc<LuSignature>, Error> {
        let sig: LuSignature = serde_json::from_str(&read(path)?)?;
        self.add_lu_signature(&name_of(path), sig)
    }

    /// A nucleus argument: an existing file, inline JSON, or `name[:t0]`.
    fn load_nucleus(&mut self, sig: &Arc<Signature>, arg: &str) -> Result<NucleusSpec, Error> {
        let path = Path::new(arg);
        let spec = if path.is_file() {
            NucleusSpec::from_json(sig, &read(path)?, &self.config)?
        } else if arg.trim_start().starts_with('{') {
            NucleusSpec::from_json(sig, arg, &self.config)?
        } else {
            let (name, t0) = match arg.split_once(':') {
                Some((n, t)) => (n, Some(t.parse()?)),
                None => (arg, None),
            };
            NucleusSpec::builtin(NucleusKind::from_name(name, t0)?, sig)?
        };
        self.add_nucleus(spec.clone())?;
        Ok(spec)
    }
}

/// Outcome of a command: rendered output and exit code.
struct Output {
    body: String,
    code: u8,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CarrierTooLarge { .. } | Error::InfiniteCarrier => EXIT_RESOURCE,
        _ => EXIT_INPUT,
    }
}

fn render<T: Serialize>(value: &T, json: bool) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
        s.push('\n');
        return s;
    }
    let Value::Object(map) = serde_json::to_value(value).expect("reports serialize") else {
        return format!("{}\n", serde_json::to_string(value).unwrap());
    };
    let mut s = String::new();
    for (k, v) in map {
        match v {
            Value::String(t) => s.push_str(&format!("{k}: {t}\n")),
            Value::Null => {}
            other => s.push_str(&format!("{k}: {other}\n")),
        }
    }
    s
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CompactOutput {
    element: String,
    #[serde(flatten)]
    verdict: CompactnessVerdict,
    /// The first `--witness-prefix` witness terms check out.
    witness_verified: Option<bool>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct NucleusOutput {
    nucleus: String,
    signature: String,
    #[serde(flatten)]
    classification: NucleusClassification,
    nuclear_algebra: Value,
}

#[derive(Serialize)]
struct GammaOutput {
    lu: String,
    gamma: String,
    signature: Signature,
    check: GammaCheck,
}

#[derive(Serialize)]
struct PhiOutput {
    signature: String,
    phi: String,
    lu: LuSignature,
}

fn execute(cli: &Cli, ws: &mut Workspace) -> Result<Output, Error> {
    let json = cli.json;
    let ok = |body| Output { body, code: EXIT_OK };
    let checked = |body, good: bool| Output {
        body,
        code: if good { EXIT_OK } else { EXIT_PROPERTY_FAILED },
    };
    Ok(match &cli.command {
        Command::Classify { spec } => {
            let sig = ws.load_signature(spec)?;
            ok(render(&classify(&sig), json))
        }
        Command::Compact { spec, element } => {
            let sig = ws.load_signature(spec)?;
            let x = Element::from_json(&sig, &read(element)?)?;
            let verdict = is_compact(&x);
            let witness_verified = verdict
                .witness
                .as_ref()
                .map(|w| w.verify(&x, ws.config.witness_prefix).is_ok());
            let good = witness_verified != Some(false);
            let out = CompactOutput {
                element: x.to_string(),
                verdict,
                witness_verified,
            };
            checked(render(&out, json), good)
        }
        Command::Nucleus { spec, nucleus } => {
            let sig = ws.load_signature(spec)?;
            let j = ws.load_nucleus(&sig, nucleus)?;
            let classification = classify_nucleus(&j, &ws.config);
            let nuclear_algebra = match nuclear_as_algebra(&j, &ws.config) {
                Ok(a) => serde_json::to_value(a).expect("reports serialize"),
                Err(e) => serde_json::json!({ "error": e.to_string() }),
            };
            let good = classification.is_nucleus;
            let out = NucleusOutput {
                nucleus: j.name().to_string(),
                signature: sig.to_string(),
                classification,
                nuclear_algebra,
            };
            checked(render(&out, json), good)
        }
        Command::Ring { ring, radical, .. } => {
            let r: FiniteRing = serde_json::from_str(&read(ring)?)?;
            ws.add_ring(&name_of(ring), r.clone())?;
            if *radical {
                let rep = radical_report(&r, &ws.config)?;
                let mut body = render(&rep, json);
                if !json {
                    for row in &rep.rows {
                        body.push_str(&format!(
                            "√{} = {} ↦ {}\n",
                            row.ideal, row.radical, row.radical_element
                        ));
                    }
                }
                checked(body, rep.verified())
            } else {
                let rep = mv_check(&r, &ws.config)?;
                let good = rep.holds();
                checked(render(&rep, json), good)
            }
        }
        Command::Gamma { spec } => {
            let lu = ws.load_lu_signature(spec)?;
            let sig = lu.gamma();
            let check = verify_gamma(&lu, &ws.config)?;
            let good = check.holds();
            let out = GammaOutput {
                lu: lu.to_string(),
                gamma: sig.to_string(),
                signature: sig,
                check,
            };
            checked(render(&out, json), good)
        }
        Command::Phi { spec } => {
            let sig = ws.load_signature(spec)?;
            let lu = phi(&sig)?;
            ok(render(
                &PhiOutput {
                    signature: sig.to_string(),
                    phi: lu.to_string(),
                    lu,
                },
                json,
            ))
        }
        Command::Hasse { spec } => {
            let sig = ws.load_signature(spec)?;
            ok(hasse_dot(&sig)?)
        }
        Command::Hom { hom } => {
            let h: ProductHom = serde_json::from_str(&read(hom)?)?;
            ws.add_hom(&name_of(hom), h.clone())?;
            let rep = coherence_equivalence(&h, &ws.config)?;
            let good = rep.agree;
            checked(render(&rep, json), good)
        }
    })
}

/// Parse `args`, run the command and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_INPUT
                }
            };
        }
    };
    let mut config = Config {
        seed: cli.seed,
        ..Config::default()
    };
    if let Some(b) = cli.bound {
        config.enumeration_bound = b;
    }
    if let Some(n) = cli.witness_prefix {
        config.witness_prefix = n;
    }
    let result = Workspace::new(config).and_then(|mut ws| execute(&cli, &mut ws));
    match result {
        Ok(output) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &output.body)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => out.write_all(output.body.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => output.code,
                Err(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                    EXIT_INPUT
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn run_args(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("mvframe").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.display().to_string()
    }

    #[test]
    fn classify_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let s = file(&dir, "s.json", r#"{"blocks":[{"kind":"chain","n":3},{"kind":"chain","n":4}]}"#);
        let (code, out, _) = run_args(&["--json", "classify", &s]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["algebraic"], true);
        assert_eq!(v["coherent"], true);
        assert_eq!(v["regular"], false);
        let p = file(&dir, "p.json", r#"{"blocks":[{"kind":"chain","n":2,"mult":"inf"}]}"#);
        let (_, out, _) = run_args(&["--json", "classify", &p]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["regular"], true);
        assert_eq!(v["coherent"], false);
        assert_eq!(v["isPowersetAlgebra"], true);
    }

    #[test]
    fn exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let bad = file(&dir, "bad.json", "{not json");
        assert_eq!(run_args(&["classify", &bad]).0, EXIT_INPUT);
        assert_eq!(run_args(&["classify", "/nonexistent/x.json"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["--bound", "0", "classify", &bad]).0, EXIT_INPUT);
        let big = file(&dir, "big.json", r#"{"blocks":[{"kind":"chain","n":15,"mult":2}]}"#);
        assert_eq!(run_args(&["hasse", &big]).0, EXIT_RESOURCE);
        let inf = file(&dir, "inf.json", r#"{"blocks":[{"kind":"chain","n":2,"mult":"inf"}]}"#);
        assert_eq!(run_args(&["hasse", &inf]).0, EXIT_RESOURCE);
        let unit = file(&dir, "unit.json", r#"{"blocks":[{"kind":"interval"}]}"#);
        assert_eq!(run_args(&["phi", &unit]).0, EXIT_INPUT);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn radical_table() {
        let dir = tempfile::tempdir().unwrap();
        let r = file(&dir, "r.json", r#"{"factors":[{"p":2,"k":3}]}"#);
        let (code, out, _) = run_args(&["ring", &r, "--radical"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("√(0) = (2) ↦ 2/3"), "{out}");
        let (code, _, _) = run_args(&["ring", &r, "--mv-check"]);
        assert_eq!(code, 0);
        assert_eq!(run_args(&["ring", &r]).0, EXIT_INPUT);
    }

    #[test]
    fn hasse_and_nucleus() {
        let dir = tempfile::tempdir().unwrap();
        let s = file(&dir, "l3.json", r#"{"blocks":[{"kind":"chain","n":3}]}"#);
        let dot = dir.path().join("l3.dot");
        let (code, out, _) = run_args(&["hasse", &s, "--out", dot.to_str().unwrap()]);
        assert_eq!((code, out.as_str()), (0, ""));
        let text = fs::read_to_string(&dot).unwrap();
        assert_eq!(text.matches("[label=").count(), 3);
        assert_eq!(text.matches("->").count(), 2);
        let u = file(&dir, "u.json", r#"{"blocks":[{"kind":"interval"}]}"#);
        let (code, out, _) = run_args(&["--json", "nucleus", &u, "ceiling"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["isNucleus"], true);
        assert_eq!(v["isDense"], true);
        assert_eq!(v["isInductive"], false);
        assert_eq!(v["isMVType"], true);
    }

    #[test]
    fn workspace_names_are_unique_per_kind() {
        let mut ws = Workspace::new(Config::default()).unwrap();
        let sig = Signature::chains(&[3]).unwrap();
        ws.add_signature("a", sig.clone()).unwrap();
        assert!(ws.add_signature("a", sig.clone()).is_err());
        ws.add_ring("a", FiniteRing::new(vec![crate::ring::ChainRing { p: 2, k: 1 }]).unwrap())
            .unwrap();
        assert!(ws.signature("a").is_some() && ws.ring("a").is_some());
        assert!(Workspace::new(Config {
            witness_prefix: 0,
            ..Config::default()
        })
        .is_err());
    }
}
