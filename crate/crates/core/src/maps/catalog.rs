use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{Monomial, ProperMapSpec};
use crate::error::{Error, Result};

/// Named polynomial proper maps.
///
/// * `linear(m, M)`: `z -> (z, 0)`.
/// * `whitney(m)`: `(z_1, ..., z_{m-1}, z_m z_1, ..., z_m z_m)` into
///   `B^{2m-1}`; for `m = 2` this is `(z_1, z_1 z_2, z_2^2)`.
/// * `power(m, d)`: all degree-`d` monomials `√(d!/α!) z^α`, which maps the
///   sphere to the sphere by the multinomial theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogMap {
    Linear { m: usize, big_m: usize },
    Whitney { m: usize },
    Power { m: usize, d: u32 },
}

impl CatalogMap {
    pub fn spec(&self) -> Result<ProperMapSpec> {
        match *self {
            CatalogMap::Linear { m, big_m } => linear(m, big_m),
            CatalogMap::Whitney { m } => whitney(m),
            CatalogMap::Power { m, d } => power(m, d),
        }
    }
}

impl fmt::Display for CatalogMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogMap::Linear { m, big_m } => write!(f, "linear:{m},{big_m}"),
            CatalogMap::Whitney { m } => write!(f, "whitney:{m}"),
            CatalogMap::Power { m, d } => write!(f, "power:{m},{d}"),
        }
    }
}

/// Accepts `linear:2,5`, `linear(2,5)`, `whitney`, `whitney:3`, `power:2,2`.
impl FromStr for CatalogMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = match s.find([':', '(']) {
            Some(i) => (&s[..i], s[i + 1..].trim_end_matches(')')),
            None => (s, ""),
        };
        let params: Vec<usize> = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::input(format!("bad catalog parameter `{p}`")))
                })
                .collect::<Result<_>>()?
        };
        catalog_entry(&name.to_ascii_lowercase(), &params)
    }
}

fn catalog_entry(name: &str, params: &[usize]) -> Result<CatalogMap> {
    match (name, params) {
        ("linear", [m, big_m]) => Ok(CatalogMap::Linear { m: *m, big_m: *big_m }),
        ("whitney", []) => Ok(CatalogMap::Whitney { m: 2 }),
        ("whitney", [m]) => Ok(CatalogMap::Whitney { m: *m }),
        ("power", [m, d]) => Ok(CatalogMap::Power {
            m: *m,
            d: u32::try_from(*d).map_err(|_| Error::input("power degree too large"))?,
        }),
        ("linear" | "whitney" | "power", _) => Err(Error::input(format!(
            "wrong number of parameters for catalog map `{name}`"
        ))),
        _ => Err(Error::input(format!("unknown catalog map `{name}`"))),
    }
}

/// Looks up a catalog map by name and integer parameters.
pub fn catalog(name: &str, params: &[usize]) -> Result<ProperMapSpec> {
    catalog_entry(&name.to_ascii_lowercase(), params)?.spec()
}

fn unit_monomial(m: usize, exps: &[(usize, u32)]) -> Monomial {
    let mut exponents = vec![0; m];
    for &(i, e) in exps {
        exponents[i] += e;
    }
    Monomial {
        exponents,
        coef: Complex64::new(1.0, 0.0),
    }
}

pub(crate) fn linear(m: usize, big_m: usize) -> Result<ProperMapSpec> {
    if m == 0 {
        return Err(Error::input("linear: m must be positive"));
    }
    if big_m < m {
        return Err(Error::input(format!("linear: M = {big_m} is below m = {m}")));
    }
    let mut comps: Vec<Vec<Monomial>> = (0..m).map(|k| vec![unit_monomial(m, &[(k, 1)])]).collect();
    comps.resize(big_m, Vec::new());
    ProperMapSpec::new(m, big_m, comps)
}

pub(crate) fn whitney(m: usize) -> Result<ProperMapSpec> {
    if m < 2 {
        return Err(Error::input("whitney: m must be at least 2"));
    }
    let last = m - 1;
    let mut comps: Vec<Vec<Monomial>> = (0..last).map(|k| vec![unit_monomial(m, &[(k, 1)])]).collect();
    for k in 0..m {
        comps.push(vec![unit_monomial(m, &[(last, 1), (k, 1)])]);
    }
    ProperMapSpec::new(m, 2 * m - 1, comps)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn multi_indices(m: usize, d: u32) -> Vec<Vec<u32>> {
    if m == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut tail in multi_indices(m - 1, d - first) {
            let mut v = vec![first];
            v.append(&mut tail);
            out.push(v);
        }
    }
    out
}

pub(crate) fn power(m: usize, d: u32) -> Result<ProperMapSpec> {
    if m == 0 || d == 0 {
        return Err(Error::input("power: m and d must be positive"));
    }
    let comps: Vec<Vec<Monomial>> = multi_indices(m, d)
        .into_iter()
        .map(|alpha| {
            let denom: f64 = alpha.iter().map(|&a| factorial(a)).product();
            vec![Monomial {
                coef: Complex64::new((factorial(d) / denom).sqrt(), 0.0),
                exponents: alpha,
            }]
        })
        .collect();
    let big_m = comps.len();
    ProperMapSpec::new(m, big_m, comps)
}
