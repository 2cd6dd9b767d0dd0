//! Slope-derived bounds: `τ`, the improved Hasse-Weil bound, and the
//! classification of curves into the supersingular and first-slope families.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::{self, ceil_div};
use crate::curve::CurveSpec;
use crate::error::{Error, Result};

/// `τ = (p-1)⌈log_p d⌉`, with `τ = 0` for `d = 1`.
pub fn tau(d: u64, p: u64) -> u64 {
    if d <= 1 {
        0
    } else {
        (p - 1) * arith::ceil_log(d, p) as u64
    }
}

/// Largest `r` with `r² ≤ x`.
pub fn isqrt(x: &BigUint) -> BigUint {
    x.sqrt()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub p: u64,
    pub s: u32,
    pub u: u32,
    pub d: u64,
    pub n: u32,
    pub genus: BigUint,
    pub tau: u64,
    /// `g·⌊2√(Q^n)⌋`.
    pub hw_classic: BigUint,
    /// Largest multiple of `p^e` not exceeding `hw_classic`.
    pub hw_improved: BigUint,
    /// `e = ⌈s·n/τ⌉`.
    pub divisibility_exponent: u64,
}

/// Improved Hasse-Weil bound for `y^{p^u} - y = f(x)`, `deg f = d`, over
/// `F_{Q^n}` with `Q = p^s`.
pub fn improved_hw(p: u64, s: u32, u: u32, d: u64, n: u32) -> Result<BoundReport> {
    arith::require_prime(p)?;
    if d < 2 || d.is_multiple_of(p) {
        return Err(Error::InvalidCurve(format!(
            "degree {d} must be at least 2 and prime to {p}"
        )));
    }
    if n == 0 || s == 0 || u == 0 {
        return Err(Error::Unsupported("n, s and u must be positive".into()));
    }
    let pb = BigUint::from(p);
    let genus = (pb.pow(u) - 1u32) * BigUint::from(d - 1) / 2u32;
    let qn = pb.pow(s * n);
    let hw_classic = &genus * isqrt(&(qn * 4u32));
    let t = tau(d, p);
    let e = ceil_div(s as u64 * n as u64, t);
    let pe = pb.pow(e as u32);
    let hw_improved = &hw_classic / &pe * &pe;
    Ok(BoundReport {
        p,
        s,
        u,
        d,
        n,
        genus,
        tau: t,
        hw_classic,
        hw_improved,
        divisibility_exponent: e,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Flag,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Flag => "FLAG",
        }
    }
}

/// A published worked example compared with the computed report.
#[derive(Clone, Debug)]
pub struct ExampleCheck {
    pub name: &'static str,
    pub report: BoundReport,
    pub published_classic: Option<BigUint>,
    pub published_value: BigUint,
    pub published_exponent: u64,
    pub value_status: Status,
    pub exponent_status: Status,
    pub note: Option<&'static str>,
}

impl ExampleCheck {
    pub fn status(&self) -> Status {
        if self.exponent_status == Status::Flag || self.value_status == Status::Flag {
            Status::Flag
        } else if self.exponent_status == Status::Pass && self.value_status == Status::Pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

struct Published {
    name: &'static str,
    args: (u64, u32, u32, u64, u32),
    classic: Option<u64>,
    value: &'static str,
    exponent: u64,
    /// Known inconsistency: mismatches become FLAG rather than FAIL.
    note: Option<&'static str>,
}

const PUBLISHED: [Published; 3] = [
    Published {
        name: "Example 1",
        args: (2, 1, 1, 15, 7),
        classic: Some(154),
        value: "152",
        exponent: 2,
        note: None,
    },
    Published {
        name: "Example 2",
        args: (2, 1, 1, 83, 101),
        classic: None,
        value: "130565559286759424",
        exponent: 15,
        note: None,
    },
    Published {
        name: "Example 3",
        args: (3, 1, 1, 104, 51),
        classic: None,
        value: "302314665566691",
        exponent: 11,
        note: Some("published exponent 11 disagrees with tau = (p-1)*ceil(log_p d) = 10, which gives 6"),
    },
];

/// Recomputes the three published examples.
pub fn published_examples() -> Vec<ExampleCheck> {
    PUBLISHED
        .iter()
        .map(|ex| {
            let (p, s, u, d, n) = ex.args;
            let report = improved_hw(p, s, u, d, n).expect("valid example parameters");
            let value: BigUint = ex.value.parse().expect("decimal literal");
            let classic = ex.classic.map(BigUint::from);
            let classic_ok = classic.as_ref().is_none_or(|c| *c == report.hw_classic);
            let mismatch = if ex.note.is_some() {
                Status::Flag
            } else {
                Status::Fail
            };
            let value_status = if value == report.hw_improved && classic_ok {
                Status::Pass
            } else {
                mismatch
            };
            let exponent_status = if ex.exponent == report.divisibility_exponent {
                Status::Pass
            } else {
                mismatch
            };
            ExampleCheck {
                name: ex.name,
                report,
                published_classic: classic,
                published_value: value,
                published_exponent: ex.exponent,
                value_status,
                exponent_status,
                note: ex.note,
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Every supported index is `p^i + p^j`.
    Supersingular,
    /// `d = i(p^h - 1)` with `1 ≤ i ≤ p-1` and `h(p-1) > 2`.
    NonSupersingular { h: u32, i: u64 },
    Neither,
}

/// Whether `l = p^i + p^j` for some `i ≤ j`.
pub fn is_two_power_sum(l: u64, p: u64) -> bool {
    let digits = arith::digits(l, p);
    let sum: u64 = digits.iter().sum();
    // p = 2 also allows 2·2^i = 2^{i+1}.
    sum == 2 || (p == 2 && sum == 1 && l >= 2)
}

/// `(h, i)` with `d = i(p^h - 1)`, `1 ≤ i ≤ p-1`, if any.
pub fn degree_shape(d: u64, p: u64) -> Option<(u32, u64)> {
    let mut h = 1u32;
    let mut m = p - 1;
    while m <= d {
        if d.is_multiple_of(m) && (1..p).contains(&(d / m)) {
            return Some((h, d / m));
        }
        h += 1;
        m = match m.checked_mul(p).and_then(|x| x.checked_add(p - 1)) {
            Some(x) => x,
            None => break,
        };
    }
    None
}

pub fn classify_family(spec: &CurveSpec) -> Family {
    let p = spec.p();
    if spec
        .support()
        .iter()
        .filter(|&&l| l >= 1)
        .all(|&l| is_two_power_sum(l, p))
    {
        return Family::Supersingular;
    }
    match degree_shape(spec.degree(), p) {
        Some((h, i)) if h as u64 * (p - 1) > 2 => Family::NonSupersingular { h, i },
        _ => Family::Neither,
    }
}

impl BoundReport {
    /// `p^e | hw_improved` and `hw_improved ≤ hw_classic < hw_improved + p^e`.
    pub fn is_consistent(&self) -> bool {
        let pe = BigUint::from(self.p).pow(self.divisibility_exponent as u32);
        (&self.hw_improved % &pe).is_zero()
            && self.hw_improved <= self.hw_classic
            && self.hw_classic < &self.hw_improved + &pe
    }
}

/// `p^e` for the report's exponent.
pub fn modulus_of(report: &BoundReport) -> BigUint {
    if report.divisibility_exponent == 0 {
        BigUint::one()
    } else {
        BigUint::from(report.p).pow(report.divisibility_exponent as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tau_values() {
        assert_eq!(tau(15, 2), 4);
        assert_eq!(tau(83, 2), 7);
        assert_eq!(tau(104, 3), 10);
        assert_eq!(tau(27, 3), 6);
        assert_eq!(tau(1, 3), 0);
    }

    #[test]
    fn isqrt_values() {
        assert_eq!(isqrt(&BigUint::from(128u32)), BigUint::from(11u32));
        assert_eq!(isqrt(&BigUint::from(512u32)), BigUint::from(22u32));
        assert_eq!(isqrt(&BigUint::zero()), BigUint::zero());
        assert_eq!(isqrt(&BigUint::from(144u32)), BigUint::from(12u32));
    }

    #[test]
    fn first_example() {
        let r = improved_hw(2, 1, 1, 15, 7).unwrap();
        assert_eq!(r.hw_classic, BigUint::from(154u32));
        assert_eq!(r.hw_improved, BigUint::from(152u32));
        assert_eq!(r.divisibility_exponent, 2);
    }

    #[test]
    fn examples_report() {
        let ex = published_examples();
        assert_eq!(ex[0].status(), Status::Pass);
        assert_eq!(ex[1].status(), Status::Pass);
        assert_eq!(ex[2].status(), Status::Flag);
        assert_eq!(ex[2].report.divisibility_exponent, 6);
        assert_eq!(ex[2].value_status, Status::Pass);
        assert_eq!(ex[2].exponent_status, Status::Flag);
    }

    #[test]
    fn rejects_bad_degree() {
        assert!(improved_hw(2, 1, 1, 4, 3).is_err());
        assert!(improved_hw(2, 1, 1, 3, 0).is_err());
    }

    fn curve(p: u64, u: u32, s: u32, support: &[usize]) -> CurveSpec {
        let d = *support.iter().max().unwrap();
        let mut c = vec![0u32; d + 1];
        for &i in support {
            c[i] = 1;
        }
        CurveSpec::over_prime_subfield(p, u, s, &c).unwrap()
    }

    #[test]
    fn families() {
        assert_eq!(classify_family(&curve(2, 2, 2, &[3])), Family::Supersingular);
        assert_eq!(classify_family(&curve(2, 1, 1, &[5, 3])), Family::Supersingular);
        assert_eq!(
            classify_family(&curve(2, 1, 1, &[7])),
            Family::NonSupersingular { h: 3, i: 1 }
        );
        assert_eq!(
            classify_family(&curve(3, 1, 1, &[8])),
            Family::NonSupersingular { h: 2, i: 1 }
        );
        assert_eq!(classify_family(&curve(3, 1, 1, &[5])), Family::Neither);
        assert_eq!(classify_family(&curve(3, 1, 1, &[2])), Family::Supersingular);
        assert_eq!(classify_family(&curve(3, 1, 1, &[1])), Family::Neither);
        assert_eq!(classify_family(&curve(2, 1, 1, &[1])), Family::Neither);
        assert_eq!(classify_family(&curve(2, 1, 1, &[3, 2])), Family::Supersingular);
    }

    proptest! {
        #[test]
        fn two_power_sums_match_search(l in 1u64..5000, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let mut found = false;
            let mut pi = 1u64;
            while pi <= l {
                let mut pj = pi;
                while pi + pj <= l {
                    found |= pi + pj == l;
                    pj *= p;
                }
                pi *= p;
            }
            prop_assert_eq!(is_two_power_sum(l, p), found);
        }

        #[test]
        fn degree_shape_matches_search(d in 1u64..3000, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let mut found = None;
            for h in 1..12u32 {
                for i in 1..p {
                    if (p.pow(h) - 1) * i == d {
                        found = Some((h, i));
                    }
                }
            }
            prop_assert_eq!(degree_shape(d, p), found);
        }

        #[test]
        fn reports_are_consistent(
            p in prop::sample::select(vec![2u64, 3, 5]),
            s in 1u32..3, u in 1u32..3, d in 2u64..200, n in 1u32..40,
        ) {
            prop_assume!(d % p != 0);
            let r = improved_hw(p, s, u, d, n).unwrap();
            prop_assert!(r.is_consistent());
            prop_assert_eq!(modulus_of(&r), BigUint::from(p).pow(r.divisibility_exponent as u32));
        }

        #[test]
        fn isqrt_brackets(x in any::<u128>()) {
            let x = BigUint::from(x);
            let r = isqrt(&x);
            prop_assert!(&r * &r <= x);
            prop_assert!((&r + 1u32) * (&r + 1u32) > x);
        }
    }
}
