use serde_json::{json, Value};

use super::{DiagForm, Mat2, PowerFactor};
use crate::exactnum::{fmt_rational, parse_bigint, QuadElem};
use crate::{Error, Result};

fn factor_json(f: &PowerFactor) -> Value {
    json!({ "scale": f.scale.to_json(), "s": f.s.to_json(), "t": f.t.to_json() })
}

fn factor_from_json(v: &Value) -> Result<PowerFactor> {
    let get = |k: &str| {
        v.get(k)
            .ok_or_else(|| Error::Parse(format!("linear factor missing {k:?}")))
            .and_then(QuadElem::from_json)
    };
    Ok(PowerFactor {
        scale: get("scale")?,
        s: get("s")?,
        t: get("t")?,
    })
}

pub fn mat_json(m: &Mat2) -> Value {
    json!([
        [m.a.to_string(), m.b.to_string()],
        [m.c.to_string(), m.d.to_string()]
    ])
}

impl DiagForm {
    /// Canonical JSON: integers as decimal strings, rationals as `"p/q"`.
    pub fn to_json(&self) -> Value {
        let s = self.siegel();
        json!({
            "r": self.r,
            "coeffs": self.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "A": self.qa.to_string(),
            "B": self.qb.to_string(),
            "C": self.qc.to_string(),
            "D": self.d.to_string(),
            "chi_r": fmt_rational(&self.chi_r),
            "alpha1": s.alpha1.to_json(),
            "beta1": s.beta1.to_json(),
            "gamma1": s.gamma1.to_json(),
            "delta1": s.delta1.to_json(),
            "frame": mat_json(&s.frame),
            "xi": factor_json(&self.xi),
            "eta": factor_json(&self.eta),
            "provenance": self.provenance,
        })
    }

    /// Rebuild a form from [`DiagForm::to_json`] output (the linear factors
    /// are authoritative; the stored coefficients are checked against them).
    pub fn from_json(v: &Value) -> Result<DiagForm> {
        let r = v
            .get("r")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("form missing integer \"r\"".into()))? as u32;
        let xi = factor_from_json(v.get("xi").ok_or_else(|| Error::Parse("form missing \"xi\"".into()))?)?;
        let eta =
            factor_from_json(v.get("eta").ok_or_else(|| Error::Parse("form missing \"eta\"".into()))?)?;
        let prov = v
            .get("provenance")
            .and_then(Value::as_str)
            .unwrap_or("json")
            .to_string();
        let f = DiagForm::from_factors(r, xi, eta, prov)?;
        if let Some(cs) = v.get("coeffs").and_then(Value::as_array) {
            let parsed: Vec<_> = cs
                .iter()
                .map(|c| {
                    c.as_str()
                        .ok_or_else(|| Error::Parse("coefficient must be a string".into()))
                        .and_then(parse_bigint)
                })
                .collect::<Result<_>>()?;
            if parsed != f.coeffs() {
                return Err(Error::Inconsistent(
                    "stored coefficients disagree with the linear factors".into(),
                ));
            }
        }
        Ok(f)
    }
}
