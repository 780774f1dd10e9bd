use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::dd::DoubleDouble;
use super::rational::Rational;

/// Which variable to differentiate by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

/// Sparse polynomial in `x`, `y` with exact rational coefficients.
///
/// Terms are keyed by the exponent pair `(i, j)` of `x^i y^j`; zero
/// coefficients are never stored, so structural equality is polynomial
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn monomial(c: impl Into<Rational>, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, &c.into());
        p
    }

    /// Build from `(coefficient, i, j)` triples; repeated exponents are summed.
    pub fn from_terms<C: Into<Rational>>(terms: impl IntoIterator<Item = (C, u32, u32)>) -> Self {
        let mut p = Self::zero();
        for (c, i, j) in terms {
            p.add_term(i, j, &c.into());
        }
        p
    }

    fn add_term(&mut self, i: u32, j: u32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|&(i, j)| (i + j) as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn degree_in(&self, var: Var) -> i64 {
        self.terms
            .keys()
            .map(|&(i, j)| match var {
                Var::X => i as i64,
                Var::Y => j as i64,
            })
            .max()
            .unwrap_or(-1)
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Rational)> {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    /// True when no term involves `var`.
    pub fn is_free_of(&self, var: Var) -> bool {
        self.degree_in(var) <= 0
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BivariatePoly {
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    pub fn partial(&self, var: Var) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            match var {
                Var::X if i > 0 => out.add_term(i - 1, j, &(c * &Rational::from_int(i))),
                Var::Y if j > 0 => out.add_term(i, j - 1, &(c * &Rational::from_int(j))),
                _ => {}
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `h(self)` for a univariate `h` given by its coefficients `h[k]` of `t^k`.
    pub fn compose_into(&self, h: &[Rational]) -> Self {
        let mut acc = Self::zero();
        for c in h.iter().rev() {
            acc = &(&acc * self) + &Self::constant(c.clone());
        }
        acc
    }

    /// Exact value at a rational point.
    pub fn evaluate(&self, at: (&Rational, &Rational)) -> Rational {
        let (x, y) = at;
        let max_i = self.degree_in(Var::X).max(0) as usize;
        let max_j = self.degree_in(Var::Y).max(0) as usize;
        let xp = powers(x, max_i);
        let yp = powers(y, max_j);
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            acc += &(&(c * &xp[i as usize]) * &yp[j as usize]);
        }
        acc
    }

    /// Double-precision value via Horner's scheme carried in double-double
    /// arithmetic, so cancellation only costs ~2^-104 relative per step.
    pub fn evaluate_f64(&self, at: (f64, f64)) -> f64 {
        self.horner().eval(at.0, at.1)
    }

    /// Precompiled form for repeated floating evaluation.
    pub fn horner(&self) -> HornerPoly {
        HornerPoly::new(self)
    }
}

fn powers(x: &Rational, n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Rational::one());
    for k in 1..=n {
        let next = &out[k - 1] * x;
        out.push(next);
    }
    out
}

/// Polynomial flattened into dense rows of double coefficients, one row per
/// power of `x`, for fast repeated evaluation.
#[derive(Debug, Clone)]
pub struct HornerPoly {
    // rows[i][j] = coefficient of x^i y^j, split into hi + lo doubles.
    rows: Vec<Vec<DoubleDouble>>,
}

impl HornerPoly {
    fn new(p: &BivariatePoly) -> Self {
        let nx = p.degree_in(Var::X).max(0) as usize + 1;
        let ny = p.degree_in(Var::Y).max(0) as usize + 1;
        let mut rows = vec![vec![DoubleDouble::ZERO; ny]; nx];
        for ((i, j), c) in p.terms() {
            let hi = c.to_f64();
            let rem = c - &Rational::from_f64(hi).unwrap_or_default();
            rows[i as usize][j as usize] = DoubleDouble::new(hi, rem.to_f64());
        }
        if p.is_zero() {
            rows = vec![vec![DoubleDouble::ZERO]];
        }
        HornerPoly { rows }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = DoubleDouble::ZERO;
        for row in self.rows.iter().rev() {
            let mut inner = DoubleDouble::ZERO;
            for c in row.iter().rev() {
                inner = inner.mul_f64(y).add(*c);
            }
            acc = acc.mul_f64(x).add(inner);
        }
        acc.to_f64()
    }
}

impl Add for &BivariatePoly {
    type Output = BivariatePoly;
    fn add(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c);
        }
        out
    }
}

impl Sub for &BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, &-c);
        }
        out
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        BivariatePoly {
            terms: self.terms.iter().map(|(&k, v)| (k, -v)).collect(),
        }
    }
}

impl Mul for &BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: &BivariatePoly) -> BivariatePoly {
        if self.is_zero() || rhs.is_zero() {
            return BivariatePoly::zero();
        }
        let mut acc: HashMap<(u32, u32), Rational> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                let prod = c1 * c2;
                acc.entry((i1 + i2, j1 + j2))
                    .and_modify(|v| *v += &prod)
                    .or_insert(prod);
            }
        }
        BivariatePoly {
            terms: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for BivariatePoly {
            type Output = BivariatePoly;
            fn $m(self, rhs: BivariatePoly) -> BivariatePoly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        -&self
    }
}

impl fmt::Debug for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivariatePoly({})", self)
    }
}
