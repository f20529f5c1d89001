//! Text formats for `reduce`.
//!
//! A legs file lists one external quantum per line:
//!
//! ```text
//! # direction species momentum [s=..] [g=.. G=..] [E=..] [K=[..]]
//! in  a [1,0,0]
//! in  b [0,1,0] s=1
//! out A [0,0,1] g=1 G=2
//! ```
//!
//! A Green-function file holds the interaction vertices and switches:
//!
//! ```text
//! vertex g4 = 1/2          # constant factor, complex as re or re+im i
//! grav_limit = true
//! ```

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{parse_rational, scalar_to_c64, Rational};
use crate::opalg::Field;
use crate::smatrix::{Direction, GreenFunction, Leg, VertexRule};

use super::grammar::parse_expression;

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col: 1, msg: msg.into() }
}

fn vector(line: usize, s: &str, n: usize) -> Result<Vec<Rational>> {
    let inner = s
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| err(line, format!("expected a bracketed vector, got {s:?}")))?;
    let v: Option<Vec<Rational>> = inner.split(',').map(parse_rational).collect();
    match v {
        Some(v) if v.len() == n => Ok(v),
        _ => Err(err(line, format!("expected {n} exact components in {s:?}"))),
    }
}

fn small(line: usize, key: &str, v: &str) -> Result<u8> {
    v.parse().map_err(|_| err(line, format!("{key}: expected a small integer, got {v:?}")))
}

pub fn parse_legs(text: &str) -> Result<Vec<Leg>> {
    let mut legs = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let words: Vec<&str> = body.split_whitespace().collect();
        if words.len() < 3 {
            return Err(err(line, "expected: direction species momentum"));
        }
        let direction = match words[0] {
            "in" => Direction::In,
            "out" => Direction::Out,
            w => return Err(err(line, format!("direction must be in or out, got {w:?}"))),
        };
        let field = Field::from_head(words[1]).ok_or_else(|| err(line, format!("unknown species {:?}", words[1])))?;
        let k = vector(line, words[2], 3)?;
        let mut leg = Leg::new(field, direction, k.try_into().expect("length checked"));
        let mut pol = (None, None);
        for w in &words[3..] {
            let (key, v) = w.split_once('=').ok_or_else(|| err(line, format!("expected key=value, got {w:?}")))?;
            match key {
                "s" => leg = leg.with_spin(small(line, key, v)?),
                "g" => pol.0 = Some(small(line, key, v)?),
                "G" => pol.1 = Some(small(line, key, v)?),
                "E" => leg = leg.with_energy(parse_rational(v).ok_or_else(|| err(line, format!("bad energy {v:?}")))?),
                "K" => leg = leg.with_inner(vector(line, v, 4)?.try_into().expect("length checked")),
                _ => return Err(err(line, format!("unknown leg attribute {key:?}"))),
            }
        }
        match pol {
            (Some(g), Some(big_g)) => leg = leg.with_polarizations(g, big_g),
            (None, None) => {}
            _ => return Err(err(line, "a gauge leg needs both g= and G=")),
        }
        legs.push(leg);
    }
    Ok(legs)
}

/// Vertices and the gravitational-limit switch.
#[derive(Debug, Clone)]
pub struct GreenSpec {
    pub vertices: Vec<(String, num_complex::Complex<f64>)>,
    pub grav_limit: bool,
}

pub fn parse_greens(text: &str) -> Result<GreenSpec> {
    let mut spec = GreenSpec { vertices: Vec::new(), grav_limit: true };
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (lhs, rhs) = body.split_once('=').ok_or_else(|| err(line, "expected key = value"))?;
        let lhs: Vec<&str> = lhs.split_whitespace().collect();
        match lhs.as_slice() {
            ["vertex", name] => {
                let e = parse_expression(rhs.trim()).map_err(|e| err(line, e.to_string()))?;
                let c = match e.terms().next() {
                    None => num_complex::Complex::zero(),
                    Some((t, c)) if e.len() == 1 && t.ops.is_empty() && t.atoms.is_one() => scalar_to_c64(c),
                    _ => return Err(err(line, "vertex factor must be a number")),
                };
                spec.vertices.push((name.to_string(), c));
            }
            ["grav_limit"] => {
                spec.grav_limit = match rhs.trim() {
                    "true" => true,
                    "false" => false,
                    v => return Err(err(line, format!("grav_limit must be true or false, got {v:?}"))),
                }
            }
            _ => return Err(err(line, format!("unknown entry {:?}", lhs.join(" ")))),
        }
    }
    Ok(spec)
}

impl GreenSpec {
    pub fn green_function(&self, legs: Vec<Leg>) -> GreenFunction {
        let n = legs.len();
        let mut g = GreenFunction::new(legs);
        for (name, c) in &self.vertices {
            g = g.with_vertex(VertexRule::constant(name, n, *c));
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::to_f64;

    #[test]
    fn legs_and_vertices() {
        let legs = parse_legs("in a [1,0,0]\nout b [0,1/2,0] s=2 # comment\nin A [0,0,1] g=1 G=3\n").unwrap();
        assert_eq!(legs.len(), 3);
        assert_eq!(legs[1].spin, Some(2));
        assert_eq!(legs[2].polarizations, Some((1, 3)));
        assert!(to_f64(&legs[1].momentum[1]) == 0.5);
        assert!(parse_legs("in A [0,0,1] g=1").is_err());
        assert!(parse_legs("sideways a [1,0,0]").is_err());
        let g = parse_greens("vertex g = 1/2+3i\ngrav_limit = false\n").unwrap();
        assert_eq!(g.vertices[0].1, num_complex::Complex::new(0.5, 3.0));
        assert!(!g.grav_limit);
        assert!(parse_greens("vertex g = a(k;K)").is_err());
    }
}
