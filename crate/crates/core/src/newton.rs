//! p-adic Newton polygons of L-polynomials over exact rationals.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::arith::{self, ceil_div};
use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// `L(T) = Σ c_i T^i` of a genus-`g` curve over `F_{p^s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    pub coeffs: Vec<BigInt>,
    pub p: u64,
    pub s: u32,
    pub g: usize,
}

impl LPolynomial {
    pub fn new(coeffs: Vec<BigInt>, p: u64, s: u32) -> Result<LPolynomial> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::Unsupported(format!(
                "an L-polynomial has odd length, got {}",
                coeffs.len()
            )));
        }
        let g = (coeffs.len() - 1) / 2;
        let l = LPolynomial { coeffs, p, s, g };
        if !l.coeffs[0].is_one() || l.coeffs[2 * g] != l.q_pow(g) {
            return Err(Error::Unsupported(format!(
                "c_0 must be 1 and c_{} must be {}^{}",
                2 * g,
                p,
                s as usize * g
            )));
        }
        Ok(l)
    }

    /// `Q^k` with `Q = p^s`.
    pub fn q_pow(&self, k: usize) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.s as usize * k)
    }

    pub fn degree(&self) -> usize {
        2 * self.g
    }

    /// `ord_p(c_i)`, `None` for a zero coefficient.
    pub fn ord(&self, i: usize) -> Option<u32> {
        arith::ord_p(&self.coeffs[i], self.p)
    }

    /// Renders `1 + 2T^2`-style text.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match i {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&mag.to_string());
                    }
                    out.push('T');
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        out
    }
}

/// Lower convex hull and slope multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, Rational)>,
    pub slopes: Vec<Rational>,
}

impl NewtonPolygon {
    pub fn first_slope(&self) -> Result<Rational> {
        self.slopes.first().copied().ok_or(Error::NoSlopes)
    }
}

/// Lower convex hull of points with strictly increasing abscissae.
/// Collinear points are dropped, so consecutive segment slopes strictly
/// increase.
pub fn lower_hull(points: &[(usize, Rational)]) -> Vec<(usize, Rational)> {
    let mut hull: Vec<(usize, Rational)> = Vec::with_capacity(points.len());
    for &pt in points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            if slope(a, b) >= slope(b, pt) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull
}

fn slope(a: (usize, Rational), b: (usize, Rational)) -> Rational {
    (b.1 - a.1) / Rational::from_integer((b.0 - a.0) as i64)
}

/// The normalized Newton polygon: hull of `(i, ord_p(c_i)/s)` over the
/// nonzero coefficients.
pub fn newton_polygon(l: &LPolynomial) -> NewtonPolygon {
    let points: Vec<(usize, Rational)> = (0..l.coeffs.len())
        .filter_map(|i| {
            l.ord(i)
                .map(|v| (i, Rational::new(v as i64, l.s as i64)))
        })
        .collect();
    polygon_from_points(&points)
}

pub fn polygon_from_points(points: &[(usize, Rational)]) -> NewtonPolygon {
    let vertices = lower_hull(points);
    let mut slopes = Vec::new();
    for w in vertices.windows(2) {
        let m = slope(w[0], w[1]);
        slopes.extend(std::iter::repeat_n(m, w[1].0 - w[0].0));
    }
    NewtonPolygon { vertices, slopes }
}

pub fn first_slope(np: &NewtonPolygon) -> Result<Rational> {
    np.first_slope()
}

/// `ord_p(c_i)/s ≥ i/2` for every `i ≥ 1`.
pub fn is_supersingular(l: &LPolynomial) -> bool {
    (1..l.coeffs.len()).all(|i| match l.ord(i) {
        None => true,
        Some(v) => 2 * v as u64 >= i as u64 * l.s as u64,
    })
}

/// `p^{⌈s·i/σ⌉}` divides every `c_i`.
pub fn check_coeff_divisibility(l: &LPolynomial, sigma: u64) -> bool {
    assert!(sigma >= 1);
    (1..l.coeffs.len()).all(|i| match l.ord(i) {
        None => true,
        Some(v) => v as u64 >= ceil_div(l.s as u64 * i as u64, sigma),
    })
}

/// One line of [`check_sn_divisibility`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnDivisibility {
    pub n: usize,
    pub s_n: BigInt,
    /// `None` when `S_n = 0`.
    pub ord: Option<u32>,
    pub required: u64,
    pub holds: bool,
}

/// Checks `p^{⌈s·n/σ⌉} | S_n` for each supplied signed `S_n` (index 0 is
/// `n = 1`).
pub fn sn_divisibility(signed_s: &[BigInt], p: u64, s: u32, sigma: u64) -> Vec<SnDivisibility> {
    signed_s
        .iter()
        .enumerate()
        .map(|(k, sn)| {
            let n = k + 1;
            let required = ceil_div(s as u64 * n as u64, sigma);
            let ord = arith::ord_p(sn, p);
            SnDivisibility {
                n,
                s_n: sn.clone(),
                ord,
                required,
                holds: ord.is_none_or(|v| v as u64 >= required),
            }
        })
        .collect()
}

/// Renders a rational as `num/den`, always with an explicit denominator.
pub fn fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses the `num/den` form produced by [`fraction`].
pub fn parse_fraction(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once('/')?;
    let d: i64 = d.parse().ok()?;
    if d == 0 {
        return None;
    }
    Some(Rational::new(n.parse().ok()?, d))
}
