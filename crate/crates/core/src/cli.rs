//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when an `--expect` assertion fails, 2 on
//! input errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{self, Model};
use crate::cdga::{invariant_subcdga, Cdga, GroupAction, LieAlgebraPresentation, SubCdga};
use crate::error::{Error, Result};
use crate::expr::{parse_element, parse_elements};
use crate::formality::formality_report;
use crate::gca::Element;
use crate::geomcheck::{compatibility_form, nijenhuis, symplectic_check, tame_check, AlmostComplexStructure, TwoForm};
use crate::homology::{CochainSpace, CohClass};
use crate::io::{model_from_text, parse_input, read_json, read_text, ActionFile, InputFile, JFile};
use crate::isotopy::isotopy_verify;
use crate::lattice::{count_fixed_points, LatticeModel, Window};
use crate::linalg::Matrix;
use crate::massey::{higher_massey, triple_massey, witness_certify, Indeterminacy};

pub const SEED_ENV: &str = "CDGA_LAB_SEED";

#[derive(Debug, Parser)]
#[command(name = "cdga-lab", version, about = "Exact CDGA computations and isotopy checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Catalog model name.
    #[arg(long, conflicts_with = "file")]
    pub model: Option<String>,
    /// JSON input file (CDGA, Lie algebra or lattice model).
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Emit canonical JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Assertion `key=value`, `key<=value` or `key>=value` on the report.
    #[arg(long = "expect", value_name = "ASSERTION")]
    pub expect: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check d^2 = 0, the Jacobi identity and the action order.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Action file to validate.
        #[arg(long)]
        action: Option<PathBuf>,
    },
    /// Betti numbers.
    Betti {
        #[command(flatten)]
        common: Common,
    },
    /// Cohomology basis in one degree.
    Cohomology {
        #[command(flatten)]
        common: Common,
        /// Cohomological degree.
        #[arg(long)]
        degree: u32,
    },
    /// Cup product of classes.
    Cup {
        #[command(flatten)]
        common: Common,
        /// Comma-separated class expressions, e.g. "[x1],[x2]".
        #[arg(long)]
        classes: String,
    },
    /// Triple or higher Massey product.
    Massey {
        #[command(flatten)]
        common: Common,
        /// Comma-separated class expressions, e.g. "[x1],[x1],[x2]".
        #[arg(long)]
        classes: String,
        /// Class paired with the value for certification.
        #[arg(long)]
        witness: Option<String>,
        /// Number of extra defining-system seeds.
        #[arg(long, default_value_t = 5)]
        samples: u64,
        /// Defining-system seed; overrides the environment.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Minimality, canonical C+N split and non-formality witness.
    Formality {
        #[command(flatten)]
        common: Common,
        /// Highest degree searched.
        #[arg(long)]
        up_to: Option<u32>,
    },
    /// Nijenhuis tensor of an almost complex structure.
    Nijenhuis {
        #[command(flatten)]
        common: Common,
        /// J file; the model's J if absent.
        #[arg(long = "J", visible_alias = "j")]
        j: Option<PathBuf>,
    },
    /// Closedness and nondegeneracy of a two-form.
    Symplectic {
        #[command(flatten)]
        common: Common,
        /// Two-form expression; defaults to the model form.
        #[arg(long)]
        omega: Option<String>,
        /// Half the dimension, the power of omega tested; defaults to half the generator count.
        #[arg(long)]
        n: Option<u32>,
    },
    /// The form g(X, Y) = omega(X, JY) and tameness.
    Compat {
        #[command(flatten)]
        common: Common,
        /// Two-form expression; defaults to the model form.
        #[arg(long)]
        omega: Option<String>,
        #[arg(long = "J", visible_alias = "j")]
        j: Option<PathBuf>,
    },
    /// Invariant sub-CDGA of a finite cyclic action.
    Invariant {
        #[command(flatten)]
        common: Common,
        /// Action file; defaults to the model action.
        #[arg(long)]
        action: Option<PathBuf>,
    },
    /// Lefschetz map H^p -> H^{2n-p}.
    Lefschetz {
        #[command(flatten)]
        common: Common,
        /// Class of the Lefschetz element; defaults to the model form.
        #[arg(long)]
        omega: Option<String>,
        /// Source degree p.
        #[arg(long)]
        p: u32,
    },
    /// Fixed points of the order-3 action on the lattice quotient.
    FixedPoints {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        radius: i64,
    },
    /// Floating-point checks of the equivariant isotopy.
    IsotopyVerify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 10_000)]
        shell_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Result of one subcommand: a JSON report and its text rendering.
pub struct Report {
    pub json: Value,
    pub text: String,
}

impl Report {
    fn from_json(json: Value) -> Report {
        let text = flatten_with(&json, false)
            .into_iter()
            .map(|(k, v)| format!("{k}: {v}"))
            .collect::<Vec<_>>()
            .join("\n");
        Report { json, text }
    }
}

/// Canonical JSON: sorted keys, two-space indentation.
pub fn canonical_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("values serialize")
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `a.b.0 -> value` for leaves; arrays of leaves also appear joined by
/// spaces under their own key.
pub fn flatten(v: &Value) -> BTreeMap<String, String> {
    flatten_with(v, true)
}

fn flatten_with(v: &Value, index_leaves: bool) -> BTreeMap<String, String> {
    fn go(prefix: &str, v: &Value, index_leaves: bool, out: &mut BTreeMap<String, String>) {
        let key = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    go(&key(k), x, index_leaves, out);
                }
            }
            Value::Array(a) => {
                let leaves = a.iter().all(|x| !x.is_object() && !x.is_array());
                if leaves {
                    out.insert(
                        prefix.to_string(),
                        a.iter().map(scalar_text).collect::<Vec<_>>().join(" "),
                    );
                }
                if !leaves || index_leaves {
                    for (i, x) in a.iter().enumerate() {
                        go(&key(&i.to_string()), x, index_leaves, out);
                    }
                }
            }
            leaf => {
                out.insert(prefix.to_string(), scalar_text(leaf));
            }
        }
    }
    let mut out = BTreeMap::new();
    go("", v, index_leaves, &mut out);
    out
}

#[derive(Debug, PartialEq)]
pub enum ExpectOutcome {
    Pass,
    Fail(String),
}

/// Checks one `--expect` assertion; unknown keys are input errors.
pub fn check_expectation(facts: &BTreeMap<String, String>, assertion: &str) -> Result<ExpectOutcome> {
    let (key, op, want) = ["<=", ">=", "="]
        .iter()
        .find_map(|op| assertion.split_once(op).map(|(k, v)| (k.trim(), *op, v.trim())))
        .ok_or_else(|| Error::Parse(format!("expectation `{assertion}` must be key=value")))?;
    let got = facts
        .get(key)
        .ok_or_else(|| Error::Parse(format!("expectation key `{key}` is not in the report")))?;
    let ok = match op {
        "=" => got == want,
        _ => {
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("`{s}` is not a number in `{assertion}`")))
            };
            let (g, w) = (parse(got)?, parse(want)?);
            if op == "<=" {
                g <= w
            } else {
                g >= w
            }
        }
    };
    Ok(if ok {
        ExpectOutcome::Pass
    } else {
        ExpectOutcome::Fail(format!("expectation `{assertion}` failed: {key} = {got}"))
    })
}

/// Everything an input source can provide.
struct Loaded {
    model: Model,
}

impl Loaded {
    fn cdga(&self) -> &Cdga {
        &self.model.cdga
    }

    fn space(&self) -> Result<CochainSpace> {
        self.model.space()
    }

    fn lie(&self) -> Result<&LieAlgebraPresentation> {
        self.model
            .lie
            .as_ref()
            .ok_or_else(|| Error::Parse("this input has no Lie algebra presentation".into()))
    }

    fn omega(&self, text: Option<&str>) -> Result<Element> {
        match text {
            Some(t) => parse_element(self.cdga().algebra(), t),
            None => self
                .model
                .omega
                .clone()
                .ok_or_else(|| Error::Parse("no two-form given; pass --omega".into())),
        }
    }

    fn j(&self, path: Option<&PathBuf>) -> Result<AlmostComplexStructure> {
        match path {
            Some(p) => read_json::<JFile>(p)?.build(),
            None => self
                .model
                .j
                .clone()
                .ok_or_else(|| Error::Parse("no almost complex structure given; pass --J".into())),
        }
    }

    fn action(&self, path: Option<&PathBuf>) -> Result<GroupAction> {
        match path {
            Some(p) => read_json::<ActionFile>(p)?.build(self.cdga()),
            None => self
                .model
                .action
                .clone()
                .ok_or_else(|| Error::Parse("no action given; pass --action".into())),
        }
    }
}

fn load(common: &Common) -> Result<Loaded> {
    match (&common.model, &common.file) {
        (Some(name), None) => Ok(Loaded {
            model: catalog::lookup(name)?,
        }),
        (None, Some(path)) => Ok(Loaded {
            model: model_from_text(&read_text(path)?)?,
        }),
        _ => Err(Error::Parse("exactly one of --model or --file is required".into())),
    }
}

fn element_json(e: &Element) -> Value {
    to_value(&e.to_json())
}

fn class_json(c: &CohClass) -> Value {
    json!({
        "degree": c.degree,
        "representative": element_json(&c.representative),
        "coords": to_value(&c.coords),
        "zero": c.is_zero(),
    })
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|r| to_value(&m.row(r).to_vec())).collect())
}

fn betti_facts(betti: &[usize]) -> serde_json::Map<String, Value> {
    betti
        .iter()
        .enumerate()
        .map(|(k, b)| (format!("b{k}"), json!(b)))
        .collect()
}

fn classes_of(space: &CochainSpace, text: &str) -> Result<Vec<CohClass>> {
    parse_elements(space.algebra(), text)?
        .iter()
        .map(|e| space.class_of(e))
        .collect()
}

fn seed_from_env() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{SEED_ENV} must be a non-negative integer, got `{s}`"))),
        Err(_) => Ok(0),
    }
}

fn run_validate(common: &Common, action: Option<&PathBuf>) -> Result<Report> {
    let l = load(common)?;
    // construction already checked d^2 = 0
    let jacobi = match &l.model.lie {
        Some(lie) => json!(lie.jacobi_violation().is_none()),
        None => Value::Null,
    };
    let action_order = match (action, &l.model.action) {
        (Some(_), _) | (None, Some(_)) => {
            let a = l.action(action)?;
            json!(a.order())
        }
        _ => Value::Null,
    };
    let real = match l.cdga().conjugation() {
        Some(_) => json!(true),
        None => Value::Null,
    };
    Ok(Report::from_json(json!({
        "d_squared_zero": true,
        "jacobi": jacobi,
        "action_order": action_order,
        "conjugation_commutes_with_d": real,
        "generators": l.cdga().algebra().num_generators(),
        "field": l.cdga().field().name(),
    })))
}

fn run_betti(common: &Common) -> Result<Report> {
    let space = load(common)?.space()?;
    let report = space.betti();
    let mut obj = betti_facts(&report.betti);
    obj.insert("betti".into(), json!(report.betti));
    obj.insert(
        "odd_degrees_with_odd_betti".into(),
        json!(report.odd_degrees_with_odd_betti),
    );
    obj.insert(
        "kahler_obstruction_odd_b1".into(),
        json!(report.odd_degrees_with_odd_betti.contains(&1)),
    );
    let text = report.betti.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ");
    Ok(Report {
        json: Value::Object(obj),
        text,
    })
}

fn run_cohomology(common: &Common, degree: u32) -> Result<Report> {
    let space = load(common)?.space()?;
    let basis = space.cohomology_basis(degree)?;
    let mut obj = serde_json::Map::new();
    obj.insert("degree".into(), json!(degree));
    obj.insert("dim".into(), json!(basis.len()));
    obj.insert(format!("b{degree}"), json!(basis.len()));
    obj.insert(
        "basis".into(),
        Value::Array(basis.iter().map(|c| element_json(&c.representative)).collect()),
    );
    let mut text = format!("H^{degree}: dim {}", basis.len());
    for c in &basis {
        text.push_str(&format!("\n  [{}]", c.representative));
    }
    Ok(Report {
        json: Value::Object(obj),
        text,
    })
}

fn run_cup(common: &Common, classes: &str) -> Result<Report> {
    let space = load(common)?.space()?;
    let cs = classes_of(&space, classes)?;
    let mut acc = cs
        .first()
        .cloned()
        .ok_or_else(|| Error::Parse("no classes given".into()))?;
    for c in &cs[1..] {
        acc = space.cup(&acc, c)?;
    }
    let text = if acc.is_zero() {
        format!("0 in H^{}", acc.degree)
    } else {
        format!("[{}] in H^{}", acc.representative, acc.degree)
    };
    Ok(Report {
        json: class_json(&acc),
        text,
    })
}

fn run_massey(
    common: &Common,
    classes: &str,
    witness: Option<&str>,
    samples: u64,
    seed: Option<u64>,
) -> Result<Report> {
    let space = load(common)?.space()?;
    let seed = match seed {
        Some(s) => s,
        None => seed_from_env()?,
    };
    massey_report(&space, classes, witness, samples, seed)
}

/// Massey product of comma-separated classes, optionally certified against
/// a witness class.
pub fn massey_report(
    space: &CochainSpace,
    classes: &str,
    witness: Option<&str>,
    samples: u64,
    seed: u64,
) -> Result<Report> {
    let cs = classes_of(space, classes)?;
    let computed = if cs.len() == 3 && seed == 0 {
        triple_massey(space, &cs[0], &cs[1], &cs[2])
    } else {
        higher_massey(space, &cs, seed)
    };
    let result = match computed {
        Ok(r) => r,
        Err(Error::MasseyUndefined(reason)) => {
            let json = json!({"defined": false, "reason": reason, "arity": cs.len()});
            return Ok(Report {
                text: format!("not defined: {reason}"),
                json,
            });
        }
        Err(e) => return Err(e),
    };
    let mut obj = serde_json::Map::new();
    obj.insert("defined".into(), json!(true));
    obj.insert("arity".into(), json!(cs.len()));
    obj.insert("seed".into(), json!(seed));
    obj.insert("value".into(), class_json(&result.value));
    obj.insert("nontrivial".into(), json!(result.nontrivial));
    match &result.indeterminacy {
        Indeterminacy::Subspace(basis) => {
            obj.insert("indeterminacy_dim".into(), json!(basis.len()));
        }
        Indeterminacy::Samples(s) => {
            obj.insert("samples".into(), Value::Array(s.iter().map(class_json).collect()));
        }
    }
    let mut certified = Value::Null;
    if let Some(w) = witness {
        let w = space.class_of(&parse_element(space.algebra(), w)?)?;
        let report = witness_certify(space, &result, &w, samples)?;
        certified = json!(report.verdict.as_str());
        obj.insert(
            "pairings".into(),
            Value::Array(report.pairings.iter().map(class_json).collect()),
        );
        obj.insert("pairing_seeds".into(), json!(report.seeds));
    }
    obj.insert("certified".into(), certified.clone());
    let mut text = format!(
        "value: [{}] in H^{}{}",
        result.value.representative,
        result.value.degree,
        if result.value.is_zero() { " (zero)" } else { "" }
    );
    if let Some(n) = result.nontrivial {
        text.push_str(&format!("\nnontrivial: {n}"));
    }
    if let Value::String(v) = &certified {
        text.push_str(&format!("\ncertified: {v}"));
    }
    Ok(Report {
        json: Value::Object(obj),
        text,
    })
}

fn run_formality(common: &Common, up_to: Option<u32>) -> Result<Report> {
    formality_json(load(common)?.cdga(), up_to)
}

/// Minimality, the C/N splitting and the nonformality search.
pub fn formality_json(cdga: &Cdga, up_to: Option<u32>) -> Result<Report> {
    let r = formality_report(cdga, up_to)?;
    let names = |v: &[Element]| Value::Array(v.iter().map(element_json).collect());
    let (c, n) = match &r.split {
        Some(s) => (names(s.c()), names(s.n())),
        None => (Value::Null, Value::Null),
    };
    let json = json!({
        "minimal": r.minimality.minimal,
        "minimality_reason": r.minimality.reason,
        "C": c,
        "N": n,
        "witness": r.witness.as_ref().map(element_json),
        "searched_up_to": r.searched_up_to,
        "verdict": r.verdict(),
    });
    let mut text = format!("verdict: {}", r.verdict());
    if let Some(s) = &r.split {
        let show = |v: &[Element]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ");
        text.push_str(&format!("\nC: {}\nN: {}", show(s.c()), show(s.n())));
    }
    match &r.witness {
        Some(w) => text.push_str(&format!("\nwitness: {w}")),
        None => text.push_str("\nwitness: none"),
    }
    Ok(Report { json, text })
}

fn run_nijenhuis(common: &Common, j: Option<&PathBuf>) -> Result<Report> {
    let l = load(common)?;
    let r = nijenhuis(l.lie()?, &l.j(j)?)?;
    let table: serde_json::Map<String, Value> = r
        .table
        .iter()
        .map(|((a, b), v)| (format!("N(X{},X{})", a + 1, b + 1), to_value(v)))
        .collect();
    Ok(Report::from_json(json!({"integrable": r.integrable, "table": table})))
}

fn run_symplectic(common: &Common, omega: Option<&str>, n: Option<u32>) -> Result<Report> {
    let l = load(common)?;
    let w = l.omega(omega)?;
    let n = n.unwrap_or(l.cdga().algebra().num_generators() as u32 / 2);
    let r = symplectic_check(l.cdga(), &w, n)?;
    let mut obj = json!({"closed": r.closed, "nondegenerate": r.nondegenerate, "n": n});
    if l.cdga().conjugation().is_some() {
        obj["real"] = json!(l.cdga().reality_check(&w)?);
    }
    if let Some(a) = &l.model.action {
        obj["invariant"] = json!(a.apply(&w) == w);
    }
    Ok(Report::from_json(obj))
}

fn run_compat(common: &Common, omega: Option<&str>, j: Option<&PathBuf>) -> Result<Report> {
    let l = load(common)?;
    let form = TwoForm::from_element(&l.omega(omega)?)?;
    let j = l.j(j)?;
    let c = compatibility_form(&form, &j)?;
    let t = tame_check(&form, &j)?;
    Ok(Report::from_json(json!({
        "g": matrix_json(&c.g),
        "symmetric": c.symmetric,
        "positive_definite": c.positive_definite,
        "riemannian": c.riemannian,
        "tame": t.tame,
        "tame_witness": t.witness.as_ref().map(|w| w.iter().map(crate::scalar::format_rational).collect::<Vec<_>>()),
        "tame_witness_value": t.witness_value.as_ref().map(crate::scalar::format_rational),
    })))
}

fn run_invariant(common: &Common, action: Option<&PathBuf>) -> Result<Report> {
    let l = load(common)?;
    let act = l.action(action)?;
    let sub: SubCdga = invariant_subcdga(l.cdga(), &act)?;
    let dims = sub.dimensions();
    let character: Vec<usize> = (0..dims.len() as u32)
        .map(|k| act.character_dimension(k))
        .collect::<Result<_>>()?;
    let space = CochainSpace::sub(&sub)?;
    let betti = space.betti().betti;
    let mut obj = serde_json::Map::new();
    for (k, d) in dims.iter().enumerate() {
        obj.insert(format!("dim{k}"), json!(d));
    }
    obj.extend(betti_facts(&betti));
    obj.insert("dims".into(), json!(dims));
    obj.insert("character_dims".into(), json!(character));
    obj.insert("betti".into(), json!(betti));
    obj.insert("order".into(), json!(act.order()));
    Ok(Report::from_json(Value::Object(obj)))
}

fn run_lefschetz(common: &Common, omega: Option<&str>, p: u32) -> Result<Report> {
    let l = load(common)?;
    let space = l.space()?;
    let w = space.class_of(&l.omega(omega)?)?;
    let n = space.top_degree() / 2;
    let r = space.lefschetz(&w, p, n)?;
    Ok(Report::from_json(json!({
        "p": r.p,
        "n": r.n,
        "rank": r.rank,
        "isomorphism": r.isomorphism,
        "matrix": matrix_json(&r.matrix),
        "images": Value::Array(r.images.iter().map(class_json).collect()),
    })))
}

fn run_fixed_points(common: &Common, radius: i64) -> Result<Report> {
    let model: LatticeModel = match (&common.model, &common.file) {
        (Some(name), None) => catalog::lookup(name)?
            .lattice
            .ok_or_else(|| Error::Parse(format!("model `{name}` has no lattice")))?,
        (None, Some(path)) => match parse_input(&read_text(path)?)? {
            InputFile::Lattice(m) => m,
            _ => return Err(Error::Parse("fixed-points needs a lattice file".into())),
        },
        _ => return Err(Error::Parse("exactly one of --model or --file is required".into())),
    };
    let r = count_fixed_points(
        &model,
        Window {
            radius,
            ..Window::default()
        },
    )?;
    Ok(Report {
        text: r.total.to_string(),
        json: to_value(&r),
    })
}

fn run_isotopy(common: &Common, samples: usize, shell_samples: usize, seed: u64) -> Result<Report> {
    if common.model.is_some() || common.file.is_some() {
        return Err(Error::Parse("isotopy-verify takes no model or file".into()));
    }
    if samples == 0 {
        return Err(Error::Parse("--samples must be positive".into()));
    }
    let r = isotopy_verify(samples, shell_samples, seed)?;
    let json = to_value(&r);
    let text = format!(
        "so_membership: {}\nequivariance_max: {:e}\nendpoints: {}\njunctions: {}\nimage_hausdorff: {:e}\nshell_continuity: {:e}\npass: {}",
        r.so_membership.pass,
        r.equivariance_max,
        r.endpoint_errors.pass,
        r.junction_pass,
        r.image_hausdorff,
        r.shell_continuity,
        r.pass
    );
    Ok(Report { json, text })
}

fn dispatch(cmd: &Command) -> Result<(Report, &Common)> {
    Ok(match cmd {
        Command::Validate { common, action } => (run_validate(common, action.as_ref())?, common),
        Command::Betti { common } => (run_betti(common)?, common),
        Command::Cohomology { common, degree } => (run_cohomology(common, *degree)?, common),
        Command::Cup { common, classes } => (run_cup(common, classes)?, common),
        Command::Massey {
            common,
            classes,
            witness,
            samples,
            seed,
        } => (
            run_massey(common, classes, witness.as_deref(), *samples, *seed)?,
            common,
        ),
        Command::Formality { common, up_to } => (run_formality(common, *up_to)?, common),
        Command::Nijenhuis { common, j } => (run_nijenhuis(common, j.as_ref())?, common),
        Command::Symplectic { common, omega, n } => (run_symplectic(common, omega.as_deref(), *n)?, common),
        Command::Compat { common, omega, j } => (run_compat(common, omega.as_deref(), j.as_ref())?, common),
        Command::Invariant { common, action } => (run_invariant(common, action.as_ref())?, common),
        Command::Lefschetz { common, omega, p } => (run_lefschetz(common, omega.as_deref(), *p)?, common),
        Command::FixedPoints { common, radius } => (run_fixed_points(common, *radius)?, common),
        Command::IsotopyVerify {
            common,
            samples,
            shell_samples,
            seed,
        } => (run_isotopy(common, *samples, *shell_samples, *seed)?, common),
    })
}

fn single_line(e: &Error) -> String {
    e.to_string().replace('\n', " ")
}

/// Runs one invocation, writing the report to `out` and diagnostics to
/// `err`; returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let (report, common) = match dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {}", single_line(&e));
            return 2;
        }
    };
    let body = if common.json {
        canonical_json(&report.json)
    } else {
        report.text.clone()
    };
    let _ = writeln!(out, "{body}");
    let facts = flatten(&report.json);
    let mut code = 0;
    for a in &common.expect {
        match check_expectation(&facts, a) {
            Ok(ExpectOutcome::Pass) => {}
            Ok(ExpectOutcome::Fail(msg)) => {
                let _ = writeln!(err, "{msg}");
                code = 1;
            }
            Err(e) => {
                let _ = writeln!(err, "error: {}", single_line(&e));
                return 2;
            }
        }
    }
    code
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("cdga-lab").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn betti_text() {
        let (code, out, _) = call(&["betti", "--model", "kt"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "1 3 4 3 1");
    }

    #[test]
    fn expectations() {
        assert_eq!(call(&["betti", "--model", "kt", "--expect", "b1=3"]).0, 0);
        assert_eq!(call(&["betti", "--model", "kt", "--expect", "b1=2"]).0, 1);
        assert_eq!(call(&["betti", "--model", "kt", "--expect", "betti=1 3 4 3 1"]).0, 0);
        assert_eq!(call(&["betti", "--model", "kt", "--expect", "nope=1"]).0, 2);
        assert_eq!(
            call(&["betti", "--model", "kt", "--expect", "b2<=4", "--expect", "b2>=4"]).0,
            0
        );
    }

    #[test]
    fn input_errors() {
        let (code, _, err) = call(&["betti", "--model", "nope"]);
        assert_eq!(code, 2);
        assert_eq!(err.trim().lines().count(), 1);
        assert_eq!(call(&["betti"]).0, 2);
        assert_eq!(call(&["cohomology", "--model", "kt", "--degree", "9"]).0, 2);
        assert_eq!(call(&["betti", "--model", "kt", "--bogus"]).0, 2);
        assert_eq!(call(&["betti", "--model", "kt", "--file", "x.json"]).0, 2);
    }

    #[test]
    fn flatten_keys() {
        let f = flatten(&json!({"a": {"b": [1, 2]}, "c": "x", "d": null}));
        assert_eq!(f["a.b"], "1 2");
        assert_eq!(f["a.b.1"], "2");
        assert_eq!(f["c"], "x");
        assert_eq!(f["d"], "null");
    }
}
