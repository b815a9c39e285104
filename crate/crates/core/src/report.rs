//! The versioned output schema shared by every front end, in JSON, CSV and
//! Markdown renderings that carry the same data.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::enumerate::EnumerationResult;
use crate::hondatate::IsogenyClass;
use crate::{Error, IntPoly, PrimePower, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Ascending coefficients, written as JSON numbers of any size.
pub mod coeffs {
    use super::*;
    use serde::de::Error as _;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(c: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(c.len()))?;
        for x in c {
            let n = serde_json::Number::from_str(&x.to_string()).map_err(serde::ser::Error::custom)?;
            seq.serialize_element(&n)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
        let nums = Vec::<serde_json::Number>::deserialize(d)?;
        nums.iter()
            .map(|n| BigInt::from_str(&n.to_string()).map_err(D::Error::custom))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub p: u64,
    pub n: u32,
}

impl From<&PrimePower> for FieldRecord {
    fn from(q: &PrimePower) -> Self {
        FieldRecord { p: q.p(), n: q.n() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalRecord {
    pub d: u64,
    pub r: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    #[serde(with = "coeffs")]
    pub h: Vec<BigInt>,
    pub e: u32,
    #[serde(rename = "P", with = "coeffs")]
    pub p: Vec<BigInt>,
    #[serde(rename = "order_L")]
    pub order_l: u64,
    pub local: LocalRecord,
}

impl From<&IsogenyClass> for ClassRecord {
    fn from(c: &IsogenyClass) -> Self {
        ClassRecord {
            h: c.h.coeffs().to_vec(),
            e: c.e,
            p: c.weil_poly.coeffs().to_vec(),
            order_l: c.order,
            local: LocalRecord {
                d: c.local.d,
                r: c.local.r,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub schema: u32,
    pub q: FieldRecord,
    pub g: u32,
    pub classes: Vec<ClassRecord>,
}

impl From<&EnumerationResult> for EnumerationReport {
    fn from(r: &EnumerationResult) -> Self {
        EnumerationReport {
            schema: SCHEMA_VERSION,
            q: (&r.q).into(),
            g: r.g,
            classes: r.classes.iter().map(ClassRecord::from).collect(),
        }
    }
}

const COLUMNS: [&str; 9] = ["p", "n", "g", "order_L", "e", "d", "r", "h", "P"];

fn join(c: &[BigInt]) -> String {
    IntPoly::new(c.to_vec()).to_csv()
}

fn split(s: &str) -> Result<Vec<BigInt>> {
    Ok(IntPoly::from_csv(s)?.into_coeffs())
}

impl EnumerationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: EnumerationReport =
            serde_json::from_str(s).map_err(|e| Error::invalid(format!("bad report JSON: {e}")))?;
        if r.schema != SCHEMA_VERSION {
            return Err(Error::invalid(format!("unsupported schema version {}", r.schema)));
        }
        Ok(r)
    }

    fn rows(&self) -> Vec<[String; 9]> {
        self.classes
            .iter()
            .map(|c| {
                [
                    self.q.p.to_string(),
                    self.q.n.to_string(),
                    self.g.to_string(),
                    c.order_l.to_string(),
                    c.e.to_string(),
                    c.local.d.to_string(),
                    c.local.r.to_string(),
                    join(&c.h),
                    join(&c.p),
                ]
            })
            .collect()
    }

    /// One row per class; coefficient lists are quoted.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(COLUMNS).expect("in-memory write");
        for row in self.rows() {
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Read back [`to_csv`](Self::to_csv) output. `q` and `g` come from the
    /// rows, so an empty table needs them supplied.
    pub fn from_csv(s: &str, q: FieldRecord, g: u32) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(s.as_bytes());
        let mut classes = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::invalid(format!("bad CSV: {e}")))?;
            classes.push(record_from_fields(&rec.iter().collect::<Vec<_>>(), &q, g)?);
        }
        Ok(EnumerationReport {
            schema: SCHEMA_VERSION,
            q,
            g,
            classes,
        })
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "Simple supersingular classes, q = {}^{}, g = {} (schema {})\n",
            self.q.p, self.q.n, self.g, self.schema
        );
        let _ = writeln!(out, "| {} |", COLUMNS.join(" | "));
        let _ = writeln!(out, "|{}", "---|".repeat(COLUMNS.len()));
        for row in self.rows() {
            let _ = writeln!(out, "| {} |", row.join(" | "));
        }
        out
    }

    pub fn from_markdown(s: &str, q: FieldRecord, g: u32) -> Result<Self> {
        let mut classes = Vec::new();
        for line in s.lines().filter(|l| l.starts_with('|')).skip(2) {
            let cells: Vec<&str> = line.trim_matches('|').split('|').map(str::trim).collect();
            classes.push(record_from_fields(&cells, &q, g)?);
        }
        Ok(EnumerationReport {
            schema: SCHEMA_VERSION,
            q,
            g,
            classes,
        })
    }
}

fn record_from_fields(f: &[&str], q: &FieldRecord, g: u32) -> Result<ClassRecord> {
    if f.len() != COLUMNS.len() {
        return Err(Error::invalid(format!("expected {} columns, got {}", COLUMNS.len(), f.len())));
    }
    let num = |i: usize| -> Result<u64> {
        f[i].parse()
            .map_err(|_| Error::invalid(format!("column {} is not a number: {}", COLUMNS[i], f[i])))
    };
    if num(0)? != q.p || num(1)? != q.n as u64 || num(2)? != g as u64 {
        return Err(Error::invalid("row belongs to a different (q, g)"));
    }
    Ok(ClassRecord {
        order_l: num(3)?,
        e: num(4)? as u32,
        local: LocalRecord { d: num(5)?, r: num(6)? },
        h: split(f[7])?,
        p: split(f[8])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_simple_ss;

    fn report(p: u64, n: u32, g: u32) -> EnumerationReport {
        (&enumerate_simple_ss(&PrimePower::new(p, n).unwrap(), g)).into()
    }

    #[test]
    fn json_shape() {
        let r = report(2, 1, 1);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["q"]["p"], 2);
        assert_eq!(v["q"]["n"], 1);
        assert_eq!(v["classes"].as_array().unwrap().len(), 3);
        let c = &v["classes"][0];
        for key in ["h", "e", "P", "order_L", "local"] {
            assert!(!c[key].is_null(), "missing {key}");
        }
        assert!(c["local"]["d"].is_u64() && c["local"]["r"].is_u64());
        assert!(c["h"][0].is_number());
    }

    #[test]
    fn formats_round_trip() {
        for (p, n, g) in [(2, 1, 1), (7, 1, 2), (3, 3, 6), (11, 3, 5), (5, 1, 3)] {
            let r = report(p, n, g);
            assert_eq!(EnumerationReport::from_json(&r.to_json()).unwrap(), r);
            assert_eq!(EnumerationReport::from_csv(&r.to_csv(), r.q.clone(), g).unwrap(), r);
            assert_eq!(EnumerationReport::from_markdown(&r.to_markdown(), r.q.clone(), g).unwrap(), r);
        }
    }

    #[test]
    fn huge_coefficients_survive_json() {
        let r = report(47, 3, 4);
        let json = r.to_json();
        assert!(json.contains(&PrimePower::new(47, 3).unwrap().q_pow(4).to_string()));
        assert_eq!(EnumerationReport::from_json(&json).unwrap(), r);
    }

    #[test]
    fn wrong_schema_is_rejected() {
        let bad = r#"{"schema":2,"q":{"p":2,"n":1},"g":1,"classes":[]}"#;
        assert!(EnumerationReport::from_json(bad).is_err());
    }
}
