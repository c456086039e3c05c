//! JSON encoding and decoding of the workbench's domain objects.
//!
//! Conventions: arbitrary-precision integers serialize as decimal strings,
//! rationals as `"num/den"` in lowest terms (integers without the `/1`),
//! small structural counts as JSON numbers.  All maps are key-sorted, so a
//! given object has exactly one encoding and reports are byte-reproducible.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use std::sync::Arc;

use crate::arith::{parse_bigint, parse_rational, rat_display};
use crate::cert::{
    CertComponent, CertFlags, CheckReport, ConstructionCertificate, EvidenceKind, Family,
};
use crate::construct::KollarChecks;
use crate::error::{Error, Result};
use crate::gf::FiniteField;
use crate::interp::FatPointScheme;
use crate::lattice::{
    parse_class, DivisorClass, IntersectionLattice, LatticeKind, SweepReport, UniversalGcdWitness,
};
use crate::linalg::IntMatrix;
use crate::pell::{NegativePellClass, PellDivisor, PellRecord};
use crate::shgh::{ExpectedDimension, SemiEffectiveOrder, CONDITION};
use crate::zariski::{CoprimeAmpleWitness, DenominatorBounds, SurfaceModel, ZariskiDecomposition};

pub fn bigint_json(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn rational_json(r: &BigRational) -> Value {
    Value::String(rat_display(r))
}

fn int_matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        m.iter()
            .map(|row| Value::Array(row.iter().map(bigint_json).collect()))
            .collect(),
    )
}

pub fn class_json(c: &DivisorClass) -> Value {
    json!({
        "coords": c.coords().iter().map(rational_json).collect::<Vec<_>>(),
        "text": c.to_string(),
    })
}

pub fn lattice_json(l: &Arc<IntersectionLattice>) -> Value {
    json!({
        "kind": l.kind().as_text(),
        "rank": l.rank(),
        "labels": l.labels(),
        "gram": int_matrix_json(l.gram()),
        "discriminant": bigint_json(l.discriminant()),
    })
}

// ---------------------------------------------------------------- readers

fn obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Malformed(format!("{what} must be a JSON object")))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| Error::Malformed(format!("missing field {key:?}")))
}

fn str_field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a str> {
    field(m, key)?
        .as_str()
        .ok_or_else(|| Error::Malformed(format!("field {key:?} must be a string")))
}

fn u64_field(m: &Map<String, Value>, key: &str) -> Result<u64> {
    field(m, key)?
        .as_u64()
        .ok_or_else(|| Error::Malformed(format!("field {key:?} must be a nonnegative integer")))
}

fn arr_field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a [Value]> {
    field(m, key)?
        .as_array()
        .map(Vec::as_slice)
        .ok_or_else(|| Error::Malformed(format!("field {key:?} must be an array")))
}

fn bool_field(m: &Map<String, Value>, key: &str) -> Result<bool> {
    field(m, key)?
        .as_bool()
        .ok_or_else(|| Error::Malformed(format!("field {key:?} must be a boolean")))
}

fn bigint_value(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => parse_bigint(s),
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Malformed(format!("{n} is not an integer"))),
        other => Err(Error::Malformed(format!("{other} is not an integer"))),
    }
}

fn rational_value(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(BigInt::from(i)))
            .ok_or_else(|| Error::Malformed(format!("{n} is not representable exactly"))),
        other => Err(Error::Malformed(format!("{other} is not a rational"))),
    }
}

fn int_matrix_value(v: &Value) -> Result<IntMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Malformed("Gram matrix must be an array of arrays".into()))?;
    rows.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Malformed("Gram matrix row must be an array".into()))?
                .iter()
                .map(bigint_value)
                .collect()
        })
        .collect()
}

pub fn lattice_from_json(v: &Value) -> Result<Arc<IntersectionLattice>> {
    let m = obj(v, "lattice")?;
    let kind = LatticeKind::parse(str_field(m, "kind")?)?;
    let lattice = match kind {
        LatticeKind::Custom => {
            let gram = int_matrix_value(field(m, "gram")?)?;
            let labels: Vec<String> = arr_field(m, "labels")?
                .iter()
                .map(|l| {
                    l.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::Malformed("labels must be strings".into()))
                })
                .collect::<Result<_>>()?;
            IntersectionLattice::custom(gram, labels)?
        }
        other => IntersectionLattice::from_kind(&other)?,
    };
    if let Some(rank) = m.get("rank").and_then(Value::as_u64) {
        if rank as usize != lattice.rank() {
            return Err(Error::Malformed(format!(
                "lattice says rank {rank} but its kind has rank {}",
                lattice.rank()
            )));
        }
    }
    Ok(lattice)
}

/// Accepts either the object form produced by [`class_json`] or a bare
/// display string.
pub fn class_from_json(lattice: &Arc<IntersectionLattice>, v: &Value) -> Result<DivisorClass> {
    match v {
        Value::String(s) => parse_class(lattice, s),
        Value::Object(m) => {
            if let Some(coords) = m.get("coords") {
                let coords: Vec<BigRational> = coords
                    .as_array()
                    .ok_or_else(|| Error::Malformed("coords must be an array".into()))?
                    .iter()
                    .map(rational_value)
                    .collect::<Result<_>>()?;
                DivisorClass::new(lattice, coords)
            } else {
                parse_class(lattice, str_field(m, "text")?)
            }
        }
        other => Err(Error::Malformed(format!("{other} is not a divisor class"))),
    }
}

pub fn model_json(model: &SurfaceModel) -> Value {
    json!({
        "lattice": lattice_json(model.lattice()),
        "curves": model.curves().iter().map(class_json).collect::<Vec<_>>(),
        "ample": model.ample().map(class_json).unwrap_or(Value::Null),
    })
}

pub fn model_from_json(v: &Value) -> Result<SurfaceModel> {
    let m = obj(v, "model")?;
    let lattice = lattice_from_json(field(m, "lattice")?)?;
    let curves: Vec<DivisorClass> = arr_field(m, "curves")?
        .iter()
        .map(|c| class_from_json(&lattice, c))
        .collect::<Result<_>>()?;
    let ample = match m.get("ample") {
        None | Some(Value::Null) => None,
        Some(a) => Some(class_from_json(&lattice, a)?),
    };
    SurfaceModel::new(&lattice, curves, ample)
}

pub fn decomposition_json(z: &ZariskiDecomposition) -> Value {
    json!({
        "class": class_json(&z.class),
        "positive": class_json(&z.positive),
        "negative": class_json(&z.negative_part()),
        "support": z.support.iter().map(class_json).collect::<Vec<_>>(),
        "coefficients": z.coefficients.iter().map(rational_json).collect::<Vec<_>>(),
        "volume": rational_json(&z.volume),
        "denominator": bigint_json(&z.denominator),
    })
}

// ------------------------------------------------------------ certificates

fn evidence_json(ev: &EvidenceKind) -> Value {
    match ev {
        EvidenceKind::ExplicitDivisor => json!({ "kind": "explicit_divisor" }),
        EvidenceKind::InterpolationRank { multiplier, field_order, degree, rank, columns } => {
            json!({
                "kind": "interpolation_rank",
                "multiplier": multiplier,
                "field_order": field_order,
                "degree": degree,
                "rank": rank,
                "columns": columns,
            })
        }
        EvidenceKind::ArithmeticCount { multiplier, degree, parameter_dim, conditions } => json!({
            "kind": "arithmetic_count",
            "multiplier": multiplier,
            "degree": degree,
            "parameter_dim": parameter_dim,
            "conditions": conditions,
        }),
        EvidenceKind::ShghConditional { statement } => {
            json!({ "kind": "shgh_conditional", "statement": statement })
        }
        EvidenceKind::Asserted { statement } => json!({ "kind": "asserted", "statement": statement }),
    }
}

fn evidence_from_json(v: &Value) -> Result<EvidenceKind> {
    let m = obj(v, "evidence")?;
    match str_field(m, "kind")? {
        "explicit_divisor" => Ok(EvidenceKind::ExplicitDivisor),
        "interpolation_rank" => Ok(EvidenceKind::InterpolationRank {
            multiplier: u64_field(m, "multiplier")?,
            field_order: u64_field(m, "field_order")?,
            degree: u64_field(m, "degree")?,
            rank: u64_field(m, "rank")? as usize,
            columns: u64_field(m, "columns")? as usize,
        }),
        "arithmetic_count" => Ok(EvidenceKind::ArithmeticCount {
            multiplier: u64_field(m, "multiplier")?,
            degree: u64_field(m, "degree")?,
            parameter_dim: u64_field(m, "parameter_dim")?,
            conditions: u64_field(m, "conditions")?,
        }),
        "shgh_conditional" => Ok(EvidenceKind::ShghConditional {
            statement: str_field(m, "statement")?.to_string(),
        }),
        "asserted" => Ok(EvidenceKind::Asserted { statement: str_field(m, "statement")?.to_string() }),
        other => Err(Error::Malformed(format!("unknown evidence kind {other:?}"))),
    }
}

pub fn certificate_json(cert: &ConstructionCertificate) -> Value {
    json!({
        "family": cert.family.to_string(),
        "lattice": lattice_json(&cert.lattice),
        "f": class_json(&cert.class_f),
        "order_claim": cert.order_claim,
        "components": cert.components.iter().map(|c| json!({
            "class": class_json(&c.class),
            "coefficient": bigint_json(&c.coefficient),
            "label": c.label,
        })).collect::<Vec<_>>(),
        "effectivity": evidence_json(&cert.effectivity),
        "non_effectivity": cert.non_effectivity.iter().map(evidence_json).collect::<Vec<_>>(),
        "gram": int_matrix_json(&cert.gram),
        "flags": {
            "d_equals_kf": cert.flags.d_equals_kf,
            "f_primitive": cert.flags.f_primitive,
            "negative_definite": cert.flags.negative_definite,
        },
        "order_bounds": cert.order_bounds.map(|(lo, hi)| json!([lo, hi])).unwrap_or(Value::Null),
        "notes": cert.notes,
    })
}

pub fn certificate_from_json(v: &Value) -> Result<ConstructionCertificate> {
    let m = obj(v, "certificate")?;
    let family = Family::parse(str_field(m, "family")?)?;
    let lattice = lattice_from_json(field(m, "lattice")?)?;
    let class_f = class_from_json(&lattice, field(m, "f")?)?;
    let order_claim = u64_field(m, "order_claim")?;
    let components = arr_field(m, "components")?
        .iter()
        .map(|c| -> Result<CertComponent> {
            let cm = obj(c, "component")?;
            Ok(CertComponent {
                class: class_from_json(&lattice, field(cm, "class")?)?,
                coefficient: bigint_value(field(cm, "coefficient")?)?,
                label: str_field(cm, "label")?.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let effectivity = evidence_from_json(field(m, "effectivity")?)?;
    let non_effectivity = arr_field(m, "non_effectivity")?
        .iter()
        .map(evidence_from_json)
        .collect::<Result<Vec<_>>>()?;
    let gram = int_matrix_value(field(m, "gram")?)?;
    let fm = obj(field(m, "flags")?, "flags")?;
    let flags = CertFlags {
        d_equals_kf: bool_field(fm, "d_equals_kf")?,
        f_primitive: bool_field(fm, "f_primitive")?,
        negative_definite: bool_field(fm, "negative_definite")?,
    };
    let order_bounds = match m.get("order_bounds") {
        None | Some(Value::Null) => None,
        Some(Value::Array(a)) if a.len() == 2 => {
            let lo = a[0].as_u64().ok_or_else(|| Error::Malformed("bad order bound".into()))?;
            let hi = a[1].as_u64().ok_or_else(|| Error::Malformed("bad order bound".into()))?;
            Some((lo, hi))
        }
        Some(other) => return Err(Error::Malformed(format!("bad order_bounds {other}"))),
    };
    let notes = match m.get("notes") {
        None => Vec::new(),
        Some(v) => v
            .as_array()
            .ok_or_else(|| Error::Malformed("notes must be an array".into()))?
            .iter()
            .map(|n| {
                n.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Malformed("notes must be strings".into()))
            })
            .collect::<Result<_>>()?,
    };
    Ok(ConstructionCertificate {
        family,
        lattice,
        class_f,
        order_claim,
        components,
        effectivity,
        non_effectivity,
        gram,
        flags,
        order_bounds,
        notes,
    })
}

pub fn check_report_json(report: &CheckReport) -> Value {
    json!({
        "family": report.family,
        "checks": report.checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
        "overall_pass": report.overall_pass,
    })
}

// ------------------------------------------------------------ schemes

/// Scheme JSON: points as triples of field-element code strings plus
/// positive multiplicities.  The field itself is supplied by the caller.
pub fn scheme_json(scheme: &FatPointScheme) -> Value {
    json!({
        "points": scheme.points().iter().map(|p| {
            Value::Array(p.0.iter().map(|c| Value::String(c.to_string())).collect())
        }).collect::<Vec<_>>(),
        "multiplicities": scheme.multiplicities(),
    })
}

pub fn scheme_from_json(field_of: FiniteField, v: &Value) -> Result<FatPointScheme> {
    let m = obj(v, "scheme")?;
    let points: Vec<[u64; 3]> = arr_field(m, "points")?
        .iter()
        .map(|p| -> Result<[u64; 3]> {
            let triple = p
                .as_array()
                .ok_or_else(|| Error::Malformed("a point must be a coordinate triple".into()))?;
            if triple.len() != 3 {
                return Err(Error::Malformed("a point must have exactly 3 coordinates".into()));
            }
            let mut out = [0u64; 3];
            for (slot, c) in out.iter_mut().zip(triple) {
                let n = bigint_value(c)?;
                *slot = n.to_u64().ok_or_else(|| {
                    Error::Malformed(format!("coordinate {n} is not a field-element code"))
                })?;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let multiplicities: Vec<u64> = arr_field(m, "multiplicities")?
        .iter()
        .map(|x| {
            x.as_u64()
                .ok_or_else(|| Error::Malformed("multiplicities must be nonnegative integers".into()))
        })
        .collect::<Result<_>>()?;
    FatPointScheme::new(field_of, points, multiplicities)
}

// ------------------------------------------------------------ reports

pub fn pell_row_json(rec: &PellRecord, d: &PellDivisor, g: &NegativePellClass) -> Value {
    json!({
        "k": d.index,
        "p": bigint_json(&rec.p),
        "q": bigint_json(&rec.q),
        "d": bigint_json(&d.degree),
        "m": bigint_json(&d.multiplicity),
        "c": bigint_json(&d.multiplier),
        "f": d.primitive.to_string(),
        "d_squared": rational_json(&d.class.self_intersection()),
        "s": bigint_json(&g.extra),
        "g_squared": bigint_json(&g.self_intersection),
    })
}

pub fn expected_dim_json(e: &ExpectedDimension) -> Value {
    json!({
        "value": bigint_json(&e.value),
        "applicable": e.applicable,
        "condition": CONDITION,
    })
}

pub fn order_search_json(o: &SemiEffectiveOrder) -> Value {
    json!({
        "order": o.order,
        "all_applicable": o.all_applicable,
        "tested": o.tested,
        "condition": CONDITION,
    })
}

pub fn sweep_json(s: &SweepReport) -> Value {
    json!({
        "trials": s.trials,
        "max_rank": s.max_rank,
        "seed": s.seed,
        "violations": s.violations,
        "nontrivial_gcds": s.nontrivial_gcds,
    })
}

pub fn gcd_witness_json(w: &UniversalGcdWitness) -> Value {
    json!({
        "gcd": bigint_json(&w.gcd),
        "pairings": w.pairings.iter().map(bigint_json).collect::<Vec<_>>(),
        "discriminant": bigint_json(&w.discriminant),
    })
}

pub fn coprime_witness_json(w: &CoprimeAmpleWitness) -> Value {
    json!({
        "ample": class_json(&w.ample),
        "pairing": bigint_json(&w.pairing),
        "f_square": bigint_json(&w.f_square),
        "gcd": bigint_json(&w.gcd),
        "candidates_tried": w.candidates_tried,
        "perturbed_volume": w.perturbed_volume.as_ref().map(rational_json).unwrap_or(Value::Null),
    })
}

pub fn bounds_json(b: &DenominatorBounds) -> Value {
    json!({
        "volume_denominator_bound": bigint_json(&b.volume_denominator_bound),
        "det_bound": bigint_json(&b.det_bound),
        "support_det": b.support_det.as_ref().map(bigint_json).unwrap_or(Value::Null),
        "det_bound_ok": b.det_bound_ok,
    })
}

pub fn kollar_json(k: &KollarChecks) -> Value {
    json!({
        "class": class_json(&k.class),
        "self_intersection": rational_json(&k.self_intersection),
        "fiber_pairing": rational_json(&k.fiber_pairing),
        "strictly_interior": k.strictly_interior,
    })
}

/// Canonical text rendering: pretty-printed JSON with sorted keys and a
/// trailing newline, identical bytes for identical values.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialization cannot fail");
    s.push('\n');
    s
}
