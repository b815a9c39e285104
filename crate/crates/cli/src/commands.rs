use num_bigint::BigInt;
use serde_json::{json, Value};

use ssav::curves::{
    charpoly_from_counts, count_points, roundtrip_counts, BinaryField, CurveAS, PointCounts,
};
use ssav::enumerate::enumerate_simple_ss;
use ssav::expr::parse_and_expand;
use ssav::hondatate::{dimension, IsogenyClass};
use ssav::numtheory::euler_phi;
use ssav::papercheck::{
    h_cyclotomic_check, mod35_no_integer_root, split_into_classes, verify_paper_tables, Evidence,
    Mod35Verdict,
};
use ssav::report::{ClassRecord, EnumerationReport, FieldRecord};
use ssav::weil::{min_poly, WeilNumber};
use ssav::{Error, IntPoly, PrimePower, Result};

use crate::output::Output;
use crate::{Command, FieldArgs};

/// Largest dimension `enumerate` will attempt.
const MAX_DIMENSION: u32 = 16;
/// Largest `phi(L)` accepted by `minpoly`.
const MAX_PHI_ORDER: u64 = 256;

pub struct Outcome {
    pub output: Output,
    pub exit: u8,
    pub message: String,
}

impl Outcome {
    fn ok(output: Output) -> Self {
        Outcome { output, exit: 0, message: String::new() }
    }
}

fn field(f: &FieldArgs) -> Result<PrimePower> {
    PrimePower::new(f.p, f.n)
}

fn coeffs(p: &IntPoly) -> Value {
    Value::Array(p.coeffs().iter().map(big).collect())
}

fn big(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse().expect("integers are valid JSON numbers"))
}

fn class_json(c: &IsogenyClass) -> Value {
    let mut v = serde_json::to_value(ClassRecord::from(c)).expect("record serializes");
    v["g"] = json!(c.g);
    v["exp_k"] = json!(c.exponent);
    v
}

fn evidence_json(e: &Evidence) -> Value {
    json!({
        "roots_on_circle": e.roots_on_circle,
        "cyclotomic_orders": e.cyclotomic,
        "factors": e.factors.as_ref().map(|f| f.iter().map(coeffs).collect::<Vec<_>>()),
    })
}

pub fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Enumerate { field: f, g } => {
            let q = field(&f)?;
            if g > MAX_DIMENSION {
                return Err(Error::Refused(format!(
                    "dimension {g} exceeds the cap of {MAX_DIMENSION}"
                )));
            }
            let r = enumerate_simple_ss(&q, g);
            Ok(Outcome::ok(Output::Enumeration(EnumerationReport::from(&r))))
        }
        Command::Dim { field: f, poly } => dim(&field(&f)?, &IntPoly::from_csv(&poly)?),
        Command::Minpoly { field: f, order, exp } => {
            let q = field(&f)?;
            if euler_phi(order) > MAX_PHI_ORDER {
                return Err(Error::Refused(format!(
                    "phi({order}) exceeds the cap of {MAX_PHI_ORDER}"
                )));
            }
            let w = WeilNumber::new(q.clone(), order, exp)?;
            let class = dimension(&min_poly(&w), &q);
            Ok(Outcome::ok(Output::Value(json!({
                "schema": 1,
                "q": FieldRecord::from(&q),
                "g": class.g,
                "classes": [class_json(&class)],
            }))))
        }
        Command::VerifyPaper { g, primes, n } => verify(&g, &primes, &n),
        Command::Modtest { poly } => {
            let f = parse_and_expand(&poly)?;
            let verdict = mod35_no_integer_root(&f)?;
            let output = Output::Value(json!({ "poly": poly, "verdict": verdict }));
            Ok(match verdict {
                Mod35Verdict::ProvenNoRoot => Outcome::ok(output),
                Mod35Verdict::Inconclusive => Outcome {
                    output,
                    exit: 1,
                    message: "residues mod 3 and 5 do not rule out an integer root".into(),
                },
            })
        }
        Command::CountCurve {
            p,
            n,
            f,
            modulus,
            alpha,
            depth,
        } => count_curve(p, n, &f, modulus, alpha, depth),
    }
}

fn dim(q: &PrimePower, p: &IntPoly) -> Result<Outcome> {
    if !p.is_monic() {
        return Err(Error::InvalidInput(format!("{p} is not monic")));
    }
    let orders = h_cyclotomic_check(p, q)?;
    let Some(classes) = split_into_classes(p, q)? else {
        return Err(Error::InvalidInput(format!(
            "{p} is a supersingular Weil polynomial but not the polynomial of an abelian variety"
        )));
    };
    let mut v = json!({
        "schema": 1,
        "q": FieldRecord::from(q),
        "P": coeffs(p),
        "cyclotomic_orders": orders,
        "simple": classes.len() == 1,
        "classes": classes.iter().map(class_json).collect::<Vec<_>>(),
    });
    if let [c] = &classes[..] {
        v["h"] = coeffs(&c.h);
        v["e"] = json!(c.e);
        v["g"] = json!(c.g);
        v["local"] = json!({ "d": c.local.d, "r": c.local.r });
    }
    Ok(Outcome::ok(Output::Value(v)))
}

fn verify(gs: &[u32], primes: &[u64], ns: &[u32]) -> Result<Outcome> {
    if let Some(&g) = gs.iter().find(|&&g| g == 0 || g > MAX_DIMENSION) {
        return Err(Error::InvalidInput(format!("dimension {g} is out of range 1..={MAX_DIMENSION}")));
    }
    let qs = primes
        .iter()
        .flat_map(|&p| ns.iter().map(move |&n| PrimePower::new(p, n)))
        .collect::<Result<Vec<_>>>()?;
    let reports = verify_paper_tables(&qs, gs)?;
    let clean = reports.iter().all(|r| r.is_clean());
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "q": FieldRecord::from(&r.q),
                "g": r.g,
                "matched": r.matched.len(),
                "matched_labels": r.matched.iter().map(|e| e.label.as_str()).collect::<Vec<_>>(),
                "missing_from_enumeration": r.missing_from_enumeration.iter().map(|(e, ev)| json!({
                    "label": e.label,
                    "P": coeffs(&e.poly),
                    "evidence": evidence_json(ev),
                })).collect::<Vec<_>>(),
                "missing_from_paper": r.missing_from_paper.iter().map(|(c, ev)| json!({
                    "class": class_json(c),
                    "evidence": evidence_json(ev),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let output = Output::Value(json!({ "schema": 1, "all_matched": clean, "reports": rows }));
    Ok(if clean {
        Outcome::ok(output)
    } else {
        Outcome {
            output,
            exit: 1,
            message: "the tables and the enumeration disagree".into(),
        }
    })
}

fn count_curve(
    p: u64,
    n: u32,
    f: &str,
    modulus: Option<u64>,
    alpha: Option<u64>,
    depth: Option<u32>,
) -> Result<Outcome> {
    if p != 2 {
        return Err(Error::InvalidInput("curves are supported in characteristic 2 only".into()));
    }
    let base = match modulus {
        Some(m) => BinaryField::new(m)?,
        None if n == 5 => BinaryField::default_f32(),
        None => BinaryField::smallest(n)?,
    };
    if base.w() != n {
        return Err(Error::InvalidInput(format!(
            "modulus has degree {}, expected {n}",
            base.w()
        )));
    }
    let alpha = alpha.unwrap_or(if n == 1 { 1 } else { 2 });
    if alpha == 0 || alpha >= base.size() {
        return Err(Error::InvalidInput("alpha must be a nonzero field element".into()));
    }
    let curve = CurveAS::from_expr(base.clone(), alpha, &parse_and_expand(f)?)?;
    let g = curve.genus();
    let depth = depth.unwrap_or(g).max(g);
    let counts = PointCounts {
        q: curve.q(),
        counts: (1..=depth).map(|i| count_points(&curve, i)).collect::<Result<_>>()?,
    };
    let first = PointCounts {
        q: counts.q,
        counts: counts.counts[..g as usize].to_vec(),
    };
    let charpoly = charpoly_from_counts(curve.q(), g, &first)?;
    let predicted = roundtrip_counts(&charpoly, curve.q(), depth as usize)?;
    Ok(Outcome::ok(Output::Value(json!({
        "schema": 1,
        "q": { "p": 2, "n": n },
        "modulus": format!("{:b}", base.modulus()),
        "alpha": format!("{alpha:b}"),
        "genus": g,
        "counts": counts.counts,
        "P": coeffs(&charpoly),
        "within_weil_bound": counts.within_weil_bound(g),
        "roundtrip_ok": predicted == counts,
    }))))
}
