//! Execution of scenario commands.

use std::sync::Arc;

use num_rational::Rational64;
use serde::Serialize;
use serde_json::{json, Value};

use novikov_core::assembly::{diff_congruence, invert_filtered, AlgebraicCobordism, FilteredEndomorphism};
use novikov_core::chain::json::parse_rational;
use novikov_core::chain::{homology_z, novikov_ranks, ChainComplex};
use novikov_core::cobordism::{glue_check, setting_check, SplittingData};
use novikov_core::dmt::{circle_novikov, morse_complex, FundamentalDomain, VectorField};
use novikov_core::matrix::{Matrix, NovikovContext};
use novikov_core::rings::NovikovElement;

use crate::scenario::{Command, Complex, Object, Scenario};
use crate::CliError;

pub const OPS: [&str; 7] = ["verify", "homology", "assemble", "glue-check", "unroll-compare", "invert", "setting-check"];

/// Command-line values that replace the scenario's parameters.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub precision: Option<i64>,
    pub stages: Option<usize>,
    pub epsilon: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Params {
    pub precision: Option<i64>,
    pub stages: Option<usize>,
    pub epsilon: Option<Rational64>,
    pub expect: Option<String>,
}

/// Result of one command. A command passes iff `discrepancies` is empty.
#[derive(Debug)]
pub struct Outcome {
    pub summary: String,
    pub result: Value,
    pub discrepancies: Vec<Value>,
}

impl Outcome {
    fn new(summary: impl Into<String>, result: Value) -> Self {
        Outcome { summary: summary.into(), result, discrepancies: Vec::new() }
    }

    fn flag<T: Serialize>(mut self, items: impl IntoIterator<Item = T>) -> Self {
        self.discrepancies.extend(items.into_iter().map(|x| serde_json::to_value(x).expect("serializable")));
        self
    }

    fn expect(mut self, expected: &Option<String>, actual: &str) -> Self {
        if let Some(e) = expected {
            if e != actual {
                self.discrepancies.push(json!({ "expected": e, "actual": actual }));
            }
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Which parameters an operation needs for a given kind of target.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Need {
    Nothing,
    Precision,
    Stages,
}

fn needs(op: &str, obj: &Object) -> Option<Need> {
    use Need::*;
    let novikov = matches!(obj, Object::Complex(Complex::Novikov(_)));
    Some(match (op, obj) {
        ("verify", Object::CellComplex(_) | Object::Field { .. } | Object::Triple(_) | Object::Splitting(_)) => Nothing,
        ("verify", Object::SplitManifold { .. } | Object::Circle(_) | Object::Square(_)) => Nothing,
        ("verify", Object::Complex(_)) => Nothing,
        ("verify", Object::Gamma(_)) => Precision,
        ("verify", Object::Domain { .. }) => Stages,
        ("homology", Object::Complex(_)) if novikov => Precision,
        ("homology", Object::CellComplex(_) | Object::Field { .. } | Object::Complex(_)) => Nothing,
        ("homology", Object::Circle(_) | Object::Gamma(_) | Object::Domain { .. }) => Precision,
        ("assemble", Object::Triple(_)) => Nothing,
        ("assemble", Object::Gamma(_) | Object::Domain { .. }) => Precision,
        ("glue-check", Object::Splitting(_) | Object::SplitManifold { .. }) => Nothing,
        ("unroll-compare", Object::Domain { .. }) => Stages,
        ("invert", Object::Series(_) | Object::Filtered(_)) => Precision,
        ("setting-check", Object::Square(_)) => Nothing,
        _ => return None,
    })
}

/// Resolves and type-checks a command before anything runs.
pub fn prepare(scenario: &Scenario, cmd: &Command, o: &Overrides) -> Result<Params, CliError> {
    if !OPS.contains(&cmd.op.as_str()) {
        return Err(CliError::UnknownCommand(cmd.op.clone()));
    }
    let obj = scenario
        .objects
        .get(&cmd.target)
        .ok_or_else(|| CliError::NameResolution(format!("command `{}` targets undeclared `{}`", cmd.op, cmd.target)))?;
    let need = needs(&cmd.op, obj)
        .ok_or_else(|| CliError::Usage(format!("`{}` does not apply to `{}`, a {}", cmd.op, cmd.target, obj.kind())))?;
    let epsilon = o
        .epsilon
        .as_ref()
        .or(cmd.epsilon.as_ref())
        .map(|s| parse_rational(s).map_err(|e| CliError::Invalid(format!("epsilon `{s}`: {e}"))))
        .transpose()?;
    let p = Params {
        precision: o.precision.or(cmd.precision),
        stages: o.stages.or(cmd.stages),
        epsilon,
        expect: cmd.expect.clone(),
    };
    let missing = |what: &str| CliError::Usage(format!("`{} {}` needs an explicit {what}", cmd.op, cmd.target));
    match need {
        Need::Precision if p.precision.is_none() => return Err(missing("precision")),
        Need::Stages if p.stages.is_none() => return Err(missing("number of stages")),
        _ => {}
    }
    if p.precision.is_some_and(|n| n < 1) {
        return Err(CliError::Usage("precision must be at least 1".into()));
    }
    if p.stages == Some(0) {
        return Err(CliError::Usage("stages must be at least 1".into()));
    }
    Ok(p)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn homology_text(c: &ChainComplex<i64>) -> (String, Value) {
    let h = homology_z(c);
    let text = h.iter().map(|(_, g)| g.to_string()).collect::<Vec<_>>().join(", ");
    let groups: Vec<Value> = h.iter().map(|(i, g)| json!({ "degree": i, "group": g.to_string() })).collect();
    (text.clone(), json!({ "groups": groups, "text": text }))
}

fn rank_outcome(c: &ChainComplex<NovikovElement>, n: i64, expect: &Option<String>) -> Result<Outcome, String> {
    let ranks = novikov_ranks(c, n).map_err(err)?;
    let text = ranks.iter().map(|(_, r)| r.to_string()).collect::<Vec<_>>().join(", ");
    let by_degree: Vec<Value> = ranks.iter().map(|(i, r)| json!({ "degree": i, "rank": r })).collect();
    Ok(Outcome::new(format!("Novikov ranks {text} at precision {n}"), json!({ "precision": n, "ranks": by_degree, "text": text }))
        .expect(expect, &text))
}

fn verify_integer(c: &ChainComplex<i64>, what: &str) -> Outcome {
    let defects = c.verify();
    Outcome::new(format!("{what}: d^2 = 0 on {} generators", c.basis().total_dim()), json!({ "dims": c.basis().dims() }))
        .flag(defects)
}

fn verify_novikov(c: &ChainComplex<NovikovElement>, n: Option<i64>, what: &str) -> Outcome {
    let (defects, modulus) = match n {
        Some(n) => (c.verify_mod(n), format!(" mod z^{n}")),
        None => (c.verify(), String::new()),
    };
    Outcome::new(
        format!("{what}: d^2 = 0{modulus} on {} generators", c.basis().total_dim()),
        json!({ "dims": c.basis().dims(), "precision": n }),
    )
    .flag(defects)
}

fn splitting_outcome(data: &SplittingData<i64>) -> Result<Outcome, String> {
    let sc = data.splitting_complex().map_err(err)?;
    let mut out = Outcome::new(
        "splitting complex: d^2 = 0, coker(p_h) = C(theta' theta'')",
        json!({ "dims": sc.complex.basis().dims() }),
    )
    .flag(sc.complex.verify());
    if !sc.coker_matches_cone() {
        out.discrepancies.push(json!({ "check": "coker_matches_cone" }));
    }
    Ok(out)
}

fn glue_outcome(data: &SplittingData<i64>) -> Result<Outcome, String> {
    let phi = data.phi.as_ref().ok_or("no attaching map phi to compare against")?;
    let r = glue_check(phi, &data.thetaprime, &data.thetasecond).map_err(err)?;
    let entries = r.discrepancy.len();
    Ok(Outcome::new(
        format!("phi = theta' theta'': {}", if r.holds { "holds" } else { "fails" }),
        json!({ "holds": r.holds, "discrepant_entries": entries }),
    )
    .flag(r.discrepancy))
}

fn split_gamma(domain: &FundamentalDomain, v_n: &VectorField) -> Result<AlgebraicCobordism, String> {
    domain.split(v_n).and_then(|s| s.extract_gamma()).map_err(err)
}

fn assemble_outcome(gamma: &AlgebraicCobordism, n: i64, with_gamma: bool) -> Result<Outcome, String> {
    let fhat = gamma.assemble_fhat(n).map_err(err)?;
    let mut result = json!({ "precision": n, "fhat": fhat.to_doc() });
    if with_gamma {
        result["gamma"] = serde_json::to_value(gamma.to_doc()).expect("serializable");
    }
    Ok(Outcome::new(format!("F-hat on {} generators, d^2 = 0 mod z^{n}", fhat.basis().total_dim()), result)
        .flag(fhat.verify_mod(n)))
}

fn matrix_rows(m: &Matrix<NovikovElement>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect()).collect()
}

fn invert_series(x: &NovikovElement, n: i64, expect: &Option<String>) -> Result<Outcome, String> {
    let inv = x.invert_unit(n).map_err(err)?;
    let one = NovikovElement::one(x.context(), None);
    let text = inv.to_string();
    let mut out = Outcome::new(format!("inverse {text}"), json!({ "precision": n, "inverse": text }));
    for (side, prod) in [("left", inv.try_mul(x)), ("right", x.try_mul(&inv))] {
        let prod = prod.map_err(err)?;
        if !prod.congruent(&one, n) {
            out.discrepancies.push(json!({ "side": side, "product": prod.to_string() }));
        }
    }
    Ok(out.expect(expect, &text))
}

fn invert_matrix(t: &FilteredEndomorphism, n: i64) -> Result<Outcome, String> {
    let inv = invert_filtered(t, n).map_err(err)?;
    let ctx = NovikovContext::new(Arc::clone(&t.theta.context().ring), Some(n));
    let id = Matrix::identity(&ctx, t.labels.len());
    let mut out = Outcome::new(
        format!("inverse of a {0}x{0} filtered endomorphism mod z^{n}", t.labels.len()),
        json!({ "precision": n, "labels": t.labels, "inverse": matrix_rows(&inv.theta) }),
    );
    for (side, prod) in [("left", inv.theta.mul(&t.theta)), ("right", t.theta.mul(&inv.theta))] {
        if !prod.congruent(&id, n) {
            out.discrepancies.push(json!({ "side": side, "product": matrix_rows(&prod) }));
        }
    }
    Ok(out)
}

/// Runs a prepared command. `Err` is a failure of the wrapped operation
/// and counts as a verification failure.
pub fn execute(scenario: &Scenario, cmd: &Command, p: &Params) -> Result<Outcome, String> {
    let obj = &scenario.objects[&cmd.target];
    let n = || p.precision.expect("checked by prepare");
    let l = || p.stages.expect("checked by prepare");
    let cell_chain = |name: &str| -> Result<ChainComplex<i64>, String> {
        match &scenario.objects[name] {
            Object::CellComplex(k) => morse_complex(k, &VectorField::empty()).map_err(err),
            _ => unreachable!("fields refer to cell complexes"),
        }
    };
    match (cmd.op.as_str(), obj) {
        ("verify", Object::CellComplex(k)) => {
            let c = morse_complex(k, &VectorField::empty()).map_err(err)?;
            Ok(verify_integer(&c, "cellular chain complex"))
        }
        ("verify", Object::Field { complex, field }) => {
            let k = match &scenario.objects[complex] {
                Object::CellComplex(k) => k,
                _ => unreachable!("fields refer to cell complexes"),
            };
            let c = morse_complex(k, field).map_err(err)?;
            Ok(verify_integer(&c, &format!("Morse complex of {} pairs", field.len())))
        }
        ("verify", Object::Complex(Complex::Integer(c))) => Ok(verify_integer(c, "complex")),
        ("verify", Object::Complex(Complex::Novikov(c))) => Ok(verify_novikov(c, p.precision, "complex")),
        ("verify", Object::Triple(t)) => {
            let total = t.assemble().map_err(err)?;
            Ok(Outcome::new("triple identities and assembled d^2 = 0", json!({ "dims": total.basis().dims() }))
                .flag(t.validate())
                .flag(total.verify()))
        }
        ("verify", Object::Splitting(s)) => splitting_outcome(s),
        ("verify", Object::SplitManifold { manifold, level_field }) => {
            let r = manifold.read(level_field).map_err(err)?;
            let mut out = splitting_outcome(&r.data)?.flag(r.split_morse.verify()).flag(r.unsplit_morse.verify());
            out.result["split_dims"] = json!(r.split_morse.basis().dims());
            out.result["unsplit_dims"] = json!(r.unsplit_morse.basis().dims());
            Ok(out)
        }
        ("verify", Object::Gamma(g)) => {
            let e = g.build_e(n()).map_err(err)?;
            Ok(Outcome::new(format!("Gamma identities and d_E^2 = 0 mod z^{}", n()), json!({ "dims": e.basis().dims() }))
                .flag(g.validate(n()))
                .flag(e.verify_mod(n())))
        }
        ("verify", Object::Domain { domain, .. }) => {
            let c = domain.z_graded_complex(l()).map_err(err)?;
            Ok(verify_novikov(&c, Some(l() as i64 + 1), &format!("unrolled cover, {} stages", l())))
        }
        ("verify", Object::Circle(f)) => {
            let c = f.morse().map_err(err)?;
            Ok(verify_integer(&c, "circle Morse complex"))
        }
        ("verify", Object::Square(sq)) => Ok(verify_integer(&sq.complex, "square complex")),
        ("homology", Object::CellComplex(_)) => {
            let c = cell_chain(&cmd.target)?;
            let (text, result) = homology_text(&c);
            Ok(Outcome::new(format!("H = {text}"), result).expect(&p.expect, &text))
        }
        ("homology", Object::Field { complex, field }) => {
            let k = match &scenario.objects[complex] {
                Object::CellComplex(k) => k,
                _ => unreachable!("fields refer to cell complexes"),
            };
            let c = morse_complex(k, field).map_err(err)?;
            let (text, result) = homology_text(&c);
            let (cellular, _) = homology_text(&cell_chain(complex)?);
            let mut out = Outcome::new(format!("H = {text}"), result).expect(&p.expect, &text);
            if cellular != text {
                out.discrepancies.push(json!({ "morse": text, "cellular": cellular }));
            }
            Ok(out)
        }
        ("homology", Object::Complex(Complex::Integer(c))) => {
            let (text, result) = homology_text(c);
            Ok(Outcome::new(format!("H = {text}"), result).expect(&p.expect, &text))
        }
        ("homology", Object::Complex(Complex::Novikov(c))) => rank_outcome(c, n(), &p.expect),
        ("homology", Object::Circle(f)) => rank_outcome(&circle_novikov(f, n()).map_err(err)?, n(), &p.expect),
        ("homology", Object::Gamma(g)) => rank_outcome(&g.build_e(n()).map_err(err)?, n(), &p.expect),
        ("homology", Object::Domain { domain, level_field }) => {
            let e = split_gamma(domain, level_field)?.build_e(n()).map_err(err)?;
            rank_outcome(&e, n(), &p.expect)
        }
        ("assemble", Object::Triple(t)) => {
            let c = t.assemble().map_err(err)?;
            Ok(Outcome::new(format!("cobordism complex on {} generators", c.basis().total_dim()), json!({ "complex": c.to_doc() }))
                .flag(c.verify()))
        }
        ("assemble", Object::Gamma(g)) => assemble_outcome(g, n(), false),
        ("assemble", Object::Domain { domain, level_field }) => assemble_outcome(&split_gamma(domain, level_field)?, n(), true),
        ("glue-check", Object::Splitting(s)) => glue_outcome(s),
        ("glue-check", Object::SplitManifold { manifold, level_field }) => {
            let r = manifold.read(level_field).map_err(err)?;
            glue_outcome(&r.data)
        }
        ("unroll-compare", Object::Domain { domain, level_field }) => {
            let order = l() as i64 + 1;
            let gamma = split_gamma(domain, level_field)?;
            let cover = domain.z_graded_complex(l()).map_err(err)?;
            let fhat = gamma.assemble_fhat(order).map_err(err)?;
            let r = diff_congruence(&fhat, &cover, order).map_err(err)?;
            Ok(Outcome::new(
                format!("F-hat vs unrolled cover ({} stages): congruent mod z^{order}: {}", l(), r.holds),
                json!({ "stages": l(), "order": r.order, "holds": r.holds }),
            )
            .flag(r.first_discrepancy))
        }
        ("invert", Object::Series(x)) => invert_series(x, n(), &p.expect),
        ("invert", Object::Filtered(t)) => invert_matrix(t, n()),
        ("setting-check", Object::Square(sq)) => {
            let eps = p.epsilon.unwrap_or_else(|| sq.epsilon());
            let r = setting_check(&sq.complex, &sq.partition, &sq.values, eps).map_err(err)?;
            Ok(Outcome::new(
                format!("{} qualifying pairs, {} violations", r.checked_pairs, r.violations.len()),
                json!({
                    "epsilon": eps.to_string(),
                    "delta": sq.delta.to_string(),
                    "mu": sq.mu.to_string(),
                    "checked_pairs": r.checked_pairs,
                }),
            )
            .flag(r.violations))
        }
        _ => unreachable!("checked by prepare"),
    }
}
