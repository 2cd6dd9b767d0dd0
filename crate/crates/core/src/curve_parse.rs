//! Text and JSON forms of [`CurveSpec`].
//!
//! Text: `p=2 u=1 s=1 f=x^5+x^3`. Coefficients are either integers in
//! `[0, p)` or parenthesized comma-separated `F_p` digit lists (constant
//! digit first) such as `(0,1)*x^3`. The `*` is optional and a leading `-`
//! negates a term.

use serde::{Deserialize, Serialize};

use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::field::FieldCtx;

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        column,
        message: message.into(),
    }
}

pub(crate) fn parse(text: &str) -> Result<CurveSpec> {
    let mut p = None;
    let mut u = None;
    let mut s = None;
    let mut f = None;
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].1.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && chars[i].1 != '=' && !chars[i].1.is_whitespace() {
            i += 1;
        }
        let key: String = chars[start..i].iter().map(|c| c.1).collect();
        if i >= chars.len() || chars[i].1 != '=' {
            return Err(err(start + 1, format!("expected key=value, found {key:?}")));
        }
        i += 1;
        let vstart = i;
        if key == "f" {
            // The polynomial runs to the end of the line and may contain spaces.
            let body: Vec<(usize, char)> = chars[vstart..]
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.1.is_whitespace())
                .map(|(k, c)| (vstart + k + 1, c.1))
                .collect();
            f = Some((vstart + 1, body));
            break;
        }
        while i < chars.len() && !chars[i].1.is_whitespace() {
            i += 1;
        }
        let val: String = chars[vstart..i].iter().map(|c| c.1).collect();
        let num: u64 = val
            .parse()
            .map_err(|_| err(vstart + 1, format!("{key} must be a nonnegative integer")))?;
        let slot = match key.as_str() {
            "p" => &mut p,
            "u" => &mut u,
            "s" => &mut s,
            _ => return Err(err(start + 1, format!("unknown key {key:?}"))),
        };
        if slot.is_some() {
            return Err(err(start + 1, format!("duplicate key {key:?}")));
        }
        *slot = Some((num, vstart + 1));
    }
    let end = text.chars().count() + 1;
    let (p, pcol) = p.ok_or_else(|| err(end, "missing p="))?;
    let (u, ucol) = u.unwrap_or((1, end));
    let (s, scol) = s.unwrap_or((1, end));
    let (fcol, body) = f.ok_or_else(|| err(end, "missing f="))?;
    let field = FieldCtx::galois(p, s.max(1) as usize).map_err(|e| err(pcol, e.to_string()))?;
    if u == 0 || u > 64 {
        return Err(err(ucol, "u must be between 1 and 64"));
    }
    if s == 0 {
        return Err(err(scol, "s must be positive"));
    }
    let coeffs = parse_poly(&body, fcol, p, s as usize, &field)?;
    CurveSpec::new(p, u as u32, s as u32, &coeffs).map_err(|e| match e {
        Error::InvalidCurve(m) => err(fcol, m),
        other => other,
    })
}

struct Cursor<'a> {
    body: &'a [(usize, char)],
    pos: usize,
    end_col: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.body.get(self.pos).map(|c| c.1)
    }

    fn col(&self) -> usize {
        self.body.get(self.pos).map_or(self.end_col, |c| c.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<u64> {
        let col = self.col();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(col, "expected an integer"));
        }
        let s: String = self.body[start..self.pos].iter().map(|c| c.1).collect();
        s.parse().map_err(|_| err(col, "integer out of range"))
    }
}

fn parse_poly(
    body: &[(usize, char)],
    fcol: usize,
    p: u64,
    s: usize,
    field: &FieldCtx,
) -> Result<Vec<Vec<u32>>> {
    let end_col = body.last().map_or(fcol, |c| c.0 + 1);
    let mut cur = Cursor {
        body,
        pos: 0,
        end_col,
    };
    if body.is_empty() {
        return Err(err(fcol, "empty polynomial"));
    }
    let mut terms: Vec<(u64, Vec<u32>)> = Vec::new();
    let mut first = true;
    while cur.peek().is_some() {
        let mut negate = false;
        if !first {
            let col = cur.col();
            if cur.eat('-') {
                negate = true;
            } else if !cur.eat('+') {
                return Err(err(col, "expected '+' or '-' between terms"));
            }
        } else if cur.eat('-') {
            negate = true;
        }
        first = false;
        let mut coeff = vec![1u32];
        let mut have_coeff = false;
        let col = cur.col();
        if cur.eat('(') {
            let mut digits = Vec::new();
            loop {
                let dcol = cur.col();
                let v = cur.int()?;
                if v >= p {
                    return Err(err(dcol, format!("digit {v} is not reduced mod {p}")));
                }
                digits.push(v as u32);
                if cur.eat(')') {
                    break;
                }
                if !cur.eat(',') {
                    return Err(err(cur.col(), "expected ',' or ')'"));
                }
            }
            if digits.len() > s {
                return Err(err(col, format!("{} digits for a field of degree {s}", digits.len())));
            }
            coeff = digits;
            have_coeff = true;
        } else if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let v = cur.int()?;
            if v >= p {
                return Err(err(col, format!("coefficient {v} is not reduced mod {p}")));
            }
            coeff = vec![v as u32];
            have_coeff = true;
        }
        if have_coeff {
            cur.eat('*');
        }
        let exp = if cur.eat('x') {
            if cur.eat('^') {
                cur.int()?
            } else {
                1
            }
        } else if have_coeff {
            0
        } else {
            return Err(err(cur.col(), "expected a coefficient or x"));
        };
        if exp > 100_000 {
            return Err(err(col, "exponent too large"));
        }
        let mut c = field
            .from_flat_digits(&coeff)
            .map_err(|e| err(col, e.to_string()))?;
        if negate {
            c = field.neg(&c).expect("same field");
        }
        terms.push((exp, field.flat_digits(&c)));
    }
    let d = terms.iter().map(|t| t.0).max().unwrap_or(0) as usize;
    let mut acc: Vec<_> = (0..=d).map(|_| field.zero()).collect();
    for (e, digits) in terms {
        let c = field.from_flat_digits(&digits).expect("reduced");
        acc[e as usize] = field.add(&acc[e as usize], &c).expect("same field");
    }
    Ok(acc.iter().map(|c| field.flat_digits(c)).collect())
}

/// JSON form of a curve: `{p, u, s, coeffs}` with `coeffs[i]` the flat
/// `F_p` digits of `a_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub p: u64,
    pub u: u32,
    pub s: u32,
    pub coeffs: Vec<Vec<u32>>,
}

impl From<&CurveSpec> for CurveJson {
    fn from(c: &CurveSpec) -> Self {
        CurveJson {
            p: c.p(),
            u: c.u(),
            s: c.s(),
            coeffs: c.coeff_digits(),
        }
    }
}

impl TryFrom<&CurveJson> for CurveSpec {
    type Error = Error;

    fn try_from(j: &CurveJson) -> Result<CurveSpec> {
        CurveSpec::new(j.p, j.u, j.s, &j.coeffs)
    }
}
