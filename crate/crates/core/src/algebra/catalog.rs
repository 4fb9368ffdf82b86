//! Named algebra constructions.
//!
//! Basis orders (fixed, so reports are reproducible):
//! - `trunc_poly(n)`: `1, x, …, x^{n-1}` in `K[x]/(x^n)`
//! - `xy_sq`: `1, x, y` in `K[x,y]/(x², xy, y²)`
//! - `matrix(k)`: matrix units `e11, e12, …, ekk`, row-major
//! - `quaternions`: `1, i, j, k`
//! - `grassmann(g)`: monomials indexed by bitmask (`1, θ1, θ2, θ1θ2, …`); generators odd
//! - `group_algebra(m)`: `1, g, …, g^{m-1}` in `K[ℤ/m]`
//! - `upper_triangular(k)`: matrix units `e_ab` with `a ≤ b`, row-major
//! - `field`: the one-dimensional algebra `K`
//! - `product(A, B)`: basis of `A` followed by basis of `B`
//! - `opposite(A)`: same basis, reversed multiplication

use std::fmt;

use super::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

const MAX_PARAM: usize = 12;

/// A parsed catalog expression such as `product(trunc_poly(2),matrix(2))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogEntry {
    TruncPoly(usize),
    XySq,
    Matrix(usize),
    Quaternions,
    Grassmann(usize),
    GroupAlgebra(usize),
    UpperTriangular(usize),
    Field,
    Product(Box<CatalogEntry>, Box<CatalogEntry>),
    Opposite(Box<CatalogEntry>),
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogEntry::TruncPoly(n) => write!(f, "trunc_poly({n})"),
            CatalogEntry::XySq => write!(f, "xy_sq"),
            CatalogEntry::Matrix(k) => write!(f, "matrix({k})"),
            CatalogEntry::Quaternions => write!(f, "quaternions"),
            CatalogEntry::Grassmann(g) => write!(f, "grassmann({g})"),
            CatalogEntry::GroupAlgebra(m) => write!(f, "group_algebra({m})"),
            CatalogEntry::UpperTriangular(k) => write!(f, "upper_triangular({k})"),
            CatalogEntry::Field => write!(f, "field"),
            CatalogEntry::Product(a, b) => write!(f, "product({a},{b})"),
            CatalogEntry::Opposite(a) => write!(f, "opposite({a})"),
        }
    }
}

/// The small algebras used by reports and tests that run "over the catalog".
pub const STANDARD: &[&str] = &[
    "field",
    "trunc_poly(2)",
    "trunc_poly(3)",
    "xy_sq",
    "group_algebra(3)",
    "matrix(2)",
    "quaternions",
    "upper_triangular(2)",
    "grassmann(1)",
    "grassmann(2)",
];

/// The commutative entries of [`STANDARD`].
pub const STANDARD_COMMUTATIVE: &[&str] = &["field", "trunc_poly(2)", "trunc_poly(3)", "xy_sq", "group_algebra(3)"];

/// Builds a catalog algebra from its textual name.
pub fn catalog(spec: &str, field: Field) -> Result<FiniteAlgebra> {
    parse_catalog(spec)?.build(field)
}

pub fn parse_catalog(spec: &str) -> Result<CatalogEntry> {
    let mut p = Parser {
        s: spec.as_bytes(),
        pos: 0,
        src: spec,
    };
    let e = p.entry()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.error("trailing characters"));
    }
    Ok(e)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    src: &'a str,
}

enum Arg {
    Int(usize),
    Entry(CatalogEntry),
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a name"));
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn arg(&mut self) -> Result<Arg> {
        self.skip_ws();
        if self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            let start = self.pos;
            while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
            }
            let n = self.src[start..self.pos]
                .parse()
                .map_err(|_| self.error("integer out of range"))?;
            Ok(Arg::Int(n))
        } else {
            Ok(Arg::Entry(self.entry()?))
        }
    }

    fn entry(&mut self) -> Result<CatalogEntry> {
        let name = self.ident()?;
        let mut args = Vec::new();
        if self.eat(b'(') && !self.eat(b')') {
            loop {
                args.push(self.arg()?);
                if self.eat(b')') {
                    break;
                }
                if !self.eat(b',') {
                    return Err(self.error("expected `,` or `)`"));
                }
            }
        }
        let int = |args: &[Arg]| -> Result<usize> {
            match args {
                [Arg::Int(n)] => Ok(*n),
                _ => Err(Error::InvalidParams(format!("`{name}` takes one integer"))),
            }
        };
        let none = |args: &[Arg]| -> Result<()> {
            if args.is_empty() {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("`{name}` takes no parameters")))
            }
        };
        Ok(match name.as_str() {
            "trunc_poly" => CatalogEntry::TruncPoly(int(&args)?),
            "xy_sq" => none(&args).map(|_| CatalogEntry::XySq)?,
            "matrix" => CatalogEntry::Matrix(int(&args)?),
            "quaternions" => none(&args).map(|_| CatalogEntry::Quaternions)?,
            "grassmann" => CatalogEntry::Grassmann(int(&args)?),
            "group_algebra" => CatalogEntry::GroupAlgebra(int(&args)?),
            "upper_triangular" => CatalogEntry::UpperTriangular(int(&args)?),
            "field" => none(&args).map(|_| CatalogEntry::Field)?,
            "product" => match <[Arg; 2]>::try_from(args) {
                Ok([Arg::Entry(a), Arg::Entry(b)]) => CatalogEntry::Product(Box::new(a), Box::new(b)),
                _ => return Err(Error::InvalidParams("`product` takes two algebras".into())),
            },
            "opposite" => match <[Arg; 1]>::try_from(args) {
                Ok([Arg::Entry(a)]) => CatalogEntry::Opposite(Box::new(a)),
                _ => return Err(Error::InvalidParams("`opposite` takes one algebra".into())),
            },
            _ => return Err(Error::UnknownCatalog(name)),
        })
    }
}

/// Sparse table builder with integer coefficients.
struct Table {
    field: Field,
    n: usize,
    sc: Vec<Scalar>,
}

impl Table {
    fn new(field: Field, n: usize) -> Table {
        Table {
            field,
            n,
            sc: vec![field.zero(); n * n * n],
        }
    }

    fn set(&mut self, i: usize, j: usize, k: usize, c: i64) {
        let n = self.n;
        self.sc[(i * n + j) * n + k] = self.field.from_i64(c);
    }

    fn finish(self, name: String, names: Vec<String>, unit_index: usize, parity: Option<Vec<u8>>) -> Result<FiniteAlgebra> {
        let mut unit = vec![self.field.zero(); self.n];
        unit[unit_index] = self.field.one();
        FiniteAlgebra::new(name, self.field, names, self.sc, unit, parity)
    }
}

fn check_range(name: &str, v: usize, lo: usize, hi: usize) -> Result<()> {
    if v < lo || v > hi {
        return Err(Error::InvalidParams(format!("{name} parameter must lie in {lo}..={hi}, got {v}")));
    }
    Ok(())
}

impl CatalogEntry {
    pub fn build(&self, field: Field) -> Result<FiniteAlgebra> {
        let name = self.to_string();
        match self {
            CatalogEntry::TruncPoly(n) => {
                let n = *n;
                check_range("trunc_poly", n, 1, 2 * MAX_PARAM)?;
                let mut t = Table::new(field, n);
                for i in 0..n {
                    for j in 0..n - i {
                        t.set(i, j, i + j, 1);
                    }
                }
                let names = (0..n)
                    .map(|i| match i {
                        0 => "1".to_string(),
                        1 => "x".to_string(),
                        _ => format!("x^{i}"),
                    })
                    .collect();
                t.finish(name, names, 0, None)
            }
            CatalogEntry::XySq => {
                let mut t = Table::new(field, 3);
                for j in 0..3 {
                    t.set(0, j, j, 1);
                    t.set(j, 0, j, 1);
                }
                t.finish(name, vec!["1".into(), "x".into(), "y".into()], 0, None)
            }
            CatalogEntry::Matrix(k) => {
                let k = *k;
                check_range("matrix", k, 1, 4)?;
                let idx = |a: usize, b: usize| a * k + b;
                let mut t = Table::new(field, k * k);
                for a in 0..k {
                    for b in 0..k {
                        for c in 0..k {
                            t.set(idx(a, b), idx(b, c), idx(a, c), 1);
                        }
                    }
                }
                let names = (0..k * k).map(|i| format!("e{}{}", i / k + 1, i % k + 1)).collect();
                let mut unit = vec![field.zero(); k * k];
                for a in 0..k {
                    unit[idx(a, a)] = field.one();
                }
                FiniteAlgebra::new(name, field, names, t.sc, unit, None)
            }
            CatalogEntry::UpperTriangular(k) => {
                let k = *k;
                check_range("upper_triangular", k, 1, 4)?;
                let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a..k).map(move |b| (a, b))).collect();
                let pos = |a: usize, b: usize| pairs.iter().position(|&p| p == (a, b)).unwrap();
                let mut t = Table::new(field, pairs.len());
                for &(a, b) in &pairs {
                    for c in b..k {
                        t.set(pos(a, b), pos(b, c), pos(a, c), 1);
                    }
                }
                let names = pairs.iter().map(|(a, b)| format!("e{}{}", a + 1, b + 1)).collect();
                let mut unit = vec![field.zero(); pairs.len()];
                for a in 0..k {
                    unit[pos(a, a)] = field.one();
                }
                FiniteAlgebra::new(name, field, names, t.sc, unit, None)
            }
            CatalogEntry::Quaternions => {
                // i² = j² = k² = −1, ij = k, jk = i, ki = j
                let mut t = Table::new(field, 4);
                for j in 0..4 {
                    t.set(0, j, j, 1);
                    t.set(j, 0, j, 1);
                }
                for i in 1..4 {
                    t.set(i, i, 0, -1);
                }
                let cyc = [(1, 2, 3), (2, 3, 1), (3, 1, 2)];
                for (a, b, c) in cyc {
                    t.set(a, b, c, 1);
                    t.set(b, a, c, -1);
                }
                t.finish(name, vec!["1".into(), "i".into(), "j".into(), "k".into()], 0, None)
            }
            CatalogEntry::Grassmann(g) => {
                let g = *g;
                check_range("grassmann", g, 0, 5)?;
                let n = 1usize << g;
                let mut t = Table::new(field, n);
                for a in 0..n {
                    for b in 0..n {
                        if a & b != 0 {
                            continue;
                        }
                        // sign of moving each generator of b past the larger generators of a
                        let mut swaps = 0;
                        for bit in 0..g {
                            if b >> bit & 1 == 1 {
                                swaps += (a >> (bit + 1)).count_ones();
                            }
                        }
                        t.set(a, b, a | b, if swaps % 2 == 0 { 1 } else { -1 });
                    }
                }
                let names = (0..n)
                    .map(|m| {
                        if m == 0 {
                            "1".to_string()
                        } else {
                            (0..g).filter(|b| m >> b & 1 == 1).map(|b| format!("θ{}", b + 1)).collect()
                        }
                    })
                    .collect();
                let parity = (0..n).map(|m: usize| (m.count_ones() % 2) as u8).collect();
                t.finish(name, names, 0, Some(parity))
            }
            CatalogEntry::GroupAlgebra(m) => {
                let m = *m;
                check_range("group_algebra", m, 1, 2 * MAX_PARAM)?;
                let mut t = Table::new(field, m);
                for a in 0..m {
                    for b in 0..m {
                        t.set(a, b, (a + b) % m, 1);
                    }
                }
                let names = (0..m)
                    .map(|i| match i {
                        0 => "1".to_string(),
                        1 => "g".to_string(),
                        _ => format!("g^{i}"),
                    })
                    .collect();
                t.finish(name, names, 0, None)
            }
            CatalogEntry::Field => Table::new(field, 1).finish_unit(name),
            CatalogEntry::Product(a, b) => {
                let a = a.build(field)?;
                let b = b.build(field)?;
                product(&a, &b, name)
            }
            CatalogEntry::Opposite(a) => {
                let mut op = a.build(field)?.opposite();
                op.set_name(name);
                Ok(op)
            }
        }
    }
}

impl Table {
    fn finish_unit(mut self, name: String) -> Result<FiniteAlgebra> {
        self.set(0, 0, 0, 1);
        self.finish(name, vec!["1".into()], 0, None)
    }
}

/// Direct product `A × B` with componentwise multiplication.
pub(crate) fn product(a: &FiniteAlgebra, b: &FiniteAlgebra, name: String) -> Result<FiniteAlgebra> {
    if a.field() != b.field() {
        return Err(Error::InvalidField("product of algebras over different fields".into()));
    }
    let field = a.field();
    let (na, nb) = (a.dim(), b.dim());
    let n = na + nb;
    let mut sc = vec![field.zero(); n * n * n];
    for i in 0..na {
        for j in 0..na {
            for (k, c) in a.product_of_basis(i, j).iter().enumerate() {
                sc[(i * n + j) * n + k] = c.clone();
            }
        }
    }
    for i in 0..nb {
        for j in 0..nb {
            for (k, c) in b.product_of_basis(i, j).iter().enumerate() {
                sc[((na + i) * n + na + j) * n + na + k] = c.clone();
            }
        }
    }
    let names = a
        .basis_names()
        .iter()
        .map(|s| format!("({s},0)"))
        .chain(b.basis_names().iter().map(|s| format!("(0,{s})")))
        .collect();
    let unit = a.unit().iter().chain(b.unit()).cloned().collect();
    let parity = match (a.parity(), b.parity()) {
        (Some(p), Some(q)) => Some(p.iter().chain(q).copied().collect()),
        _ => None,
    };
    FiniteAlgebra::new(name, field, names, sc, unit, parity)
}
