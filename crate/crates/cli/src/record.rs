//! JSON records. Field order is fixed by declaration order and big
//! integers are decimal strings.

use serde::{Deserialize, Serialize};
use slopekit_core::bounds::{BoundReport, ExampleCheck, Family};
use slopekit_core::newton::{fraction, newton_polygon, NewtonPolygon};
use slopekit_core::verify::CheckReport;
use slopekit_core::{CurveSpec, LPolynomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub curve: String,
    pub genus: u64,
    pub lpoly: Vec<String>,
    pub vertices: Vec<(usize, String)>,
    pub slopes: Vec<String>,
    pub first_slope: Option<String>,
    pub supersingular: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<Verdicts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub sigma: u64,
    pub tau: u64,
    pub sigma_bound: bool,
    pub tau_bound: bool,
    pub p_rank_zero: bool,
    pub coeff_divisibility: bool,
    pub sn: Vec<SnRecord>,
    pub improved_hw: bool,
    pub family: String,
    pub family_consistent: Option<bool>,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnRecord {
    pub n: usize,
    pub s_n: String,
    pub ord: Option<u32>,
    pub required: u64,
    pub holds: bool,
}

fn polygon_fields(np: &NewtonPolygon) -> (Vec<(usize, String)>, Vec<String>, Option<String>) {
    (
        np.vertices.iter().map(|(i, y)| (*i, fraction(y))).collect(),
        np.slopes.iter().map(fraction).collect(),
        np.first_slope().ok().map(|s| fraction(&s)),
    )
}

pub fn family_label(f: Family) -> String {
    match f {
        Family::Supersingular => "supersingular".into(),
        Family::NonSupersingular { h, i } => format!("non-supersingular(h={h},i={i})"),
        Family::Neither => "neither".into(),
    }
}

impl RunRecord {
    pub fn from_lpoly(spec: &CurveSpec, l: &LPolynomial) -> RunRecord {
        let np = newton_polygon(l);
        let (vertices, slopes, first_slope) = polygon_fields(&np);
        RunRecord {
            curve: spec.render(),
            genus: spec.genus(),
            lpoly: l.coeffs.iter().map(|c| c.to_string()).collect(),
            vertices,
            slopes,
            first_slope,
            supersingular: slopekit_core::newton::is_supersingular(l),
            verdicts: None,
            elapsed_ms: None,
        }
    }

    pub fn from_check(spec: &CurveSpec, r: &CheckReport) -> RunRecord {
        let mut rec = RunRecord::from_lpoly(spec, &r.lpoly);
        rec.verdicts = Some(Verdicts {
            sigma: r.sigma,
            tau: r.tau,
            sigma_bound: r.sigma_bound,
            tau_bound: r.tau_bound,
            p_rank_zero: r.p_rank_zero,
            coeff_divisibility: r.coeff_divisibility,
            sn: r
                .sn
                .iter()
                .map(|s| SnRecord {
                    n: s.n,
                    s_n: s.s_n.to_string(),
                    ord: s.ord,
                    required: s.required,
                    holds: s.holds,
                })
                .collect(),
            improved_hw: r.improved_hw,
            family: family_label(r.family),
            family_consistent: r.family_consistent,
            violations: r.violations().into_iter().map(String::from).collect(),
        });
        rec
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonRecord {
    pub coeffs: Vec<String>,
    pub vertices: Vec<(usize, String)>,
    pub slopes: Vec<String>,
    pub first_slope: Option<String>,
    pub supersingular: bool,
}

impl NewtonRecord {
    pub fn new(l: &LPolynomial) -> NewtonRecord {
        let (vertices, slopes, first_slope) = polygon_fields(&newton_polygon(l));
        NewtonRecord {
            coeffs: l.coeffs.iter().map(|c| c.to_string()).collect(),
            vertices,
            slopes,
            first_slope,
            supersingular: slopekit_core::newton::is_supersingular(l),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub p: u64,
    pub s: u32,
    pub u: u32,
    pub d: u64,
    pub n: u32,
    pub genus: String,
    pub tau: u64,
    pub hw_classic: String,
    pub hw_improved: String,
    pub divisibility_exponent: u64,
}

impl From<&BoundReport> for BoundRecord {
    fn from(r: &BoundReport) -> Self {
        BoundRecord {
            p: r.p,
            s: r.s,
            u: r.u,
            d: r.d,
            n: r.n,
            genus: r.genus.to_string(),
            tau: r.tau,
            hw_classic: r.hw_classic.to_string(),
            hw_improved: r.hw_improved.to_string(),
            divisibility_exponent: r.divisibility_exponent,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleRecord {
    pub name: String,
    pub status: String,
    pub computed: BoundRecord,
    pub published_classic: Option<String>,
    pub published_value: String,
    pub published_exponent: u64,
    pub value_status: String,
    pub exponent_status: String,
    pub note: Option<String>,
}

impl From<&ExampleCheck> for ExampleRecord {
    fn from(e: &ExampleCheck) -> Self {
        ExampleRecord {
            name: e.name.into(),
            status: e.status().label().into(),
            computed: BoundRecord::from(&e.report),
            published_classic: e.published_classic.as_ref().map(|c| c.to_string()),
            published_value: e.published_value.to_string(),
            published_exponent: e.published_exponent,
            value_status: e.value_status.label().into(),
            exponent_status: e.exponent_status.label().into(),
            note: e.note.map(String::from),
        }
    }
}
