use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Coefficients below this magnitude are dropped after every operation.
pub const PRUNE: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Sparse polynomial in two complex variables.
///
/// Terms map exponent pairs `(j, k)` to the coefficient of `x^j y^k`.
/// No stored coefficient is (numerically) zero.
#[derive(Clone, PartialEq, Default)]
pub struct BivariatePolynomial {
    terms: BTreeMap<(u32, u32), Complex64>,
}

impl BivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(j: u32, k: u32, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(j, k, c);
        p
    }

    /// `x`
    pub fn x() -> Self {
        Self::monomial(1, 0, Complex64::new(1.0, 0.0))
    }

    /// `y`
    pub fn y() -> Self {
        Self::monomial(0, 1, Complex64::new(1.0, 0.0))
    }

    /// Sum of the given terms; repeated exponents accumulate.
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Complex64)>>(it: I) -> Self {
        let mut p = Self::zero();
        for ((j, k), c) in it {
            p.add_term(j, k, c);
        }
        p
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real(terms: &[(u32, u32, f64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(j, k, c)| ((j, k), Complex64::new(c, 0.0))))
    }

    pub fn add_term(&mut self, j: u32, k: u32, c: Complex64) {
        let e = self.terms.entry((j, k)).or_insert(ZERO);
        *e += c;
        if e.norm() < PRUNE {
            self.terms.remove(&(j, k));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(j, k)| j + k).max().unwrap_or(0)
    }

    /// Highest power of `x` (resp. `y`) present.
    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|&(j, _)| j).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|&(_, k)| k).max().unwrap_or(0)
    }

    /// Lowest total degree present (`None` for zero).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(j, k)| j + k).min()
    }

    pub fn coeff(&self, j: u32, k: u32) -> Complex64 {
        self.terms.get(&(j, k)).copied().unwrap_or(ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Complex64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn evaluate(&self, x: Complex64, y: Complex64) -> Complex64 {
        if self.is_zero() {
            return ZERO;
        }
        let xp = powers(x, self.degree_x());
        let yp = powers(y, self.degree_y());
        self.terms
            .iter()
            .map(|(&(j, k), &c)| c * xp[j as usize] * yp[k as usize])
            .sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * s)))
    }

    pub fn dx(&self) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|&((j, _), _)| j > 0)
                .map(|((j, k), c)| ((j - 1, k), c * j as f64)),
        )
    }

    pub fn dy(&self) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|&((_, k), _)| k > 0)
                .map(|((j, k), c)| ((j, k - 1), c * k as f64)),
        )
    }

    /// Drop every term of total degree above `n`.
    pub fn truncate(&self, n: u32) -> Self {
        Self::from_terms(self.terms().filter(|&((j, k), _)| j + k <= n))
    }

    /// Terms of total degree exactly `n`.
    pub fn homogeneous_part(&self, n: u32) -> Self {
        Self::from_terms(self.terms().filter(|&((j, k), _)| j + k == n))
    }

    /// Apply an exponent relabeling; used to build chart polynomials.
    pub fn map_exponents(&self, f: impl Fn(u32, u32) -> (u32, u32)) -> Self {
        Self::from_terms(self.terms().map(|((j, k), c)| (f(j, k), c)))
    }

    /// Product truncated at total degree `n`.
    pub fn mul_trunc(&self, other: &Self, n: u32) -> Self {
        let mut out = BTreeMap::<(u32, u32), Complex64>::new();
        for (&(j1, k1), &c1) in &self.terms {
            for (&(j2, k2), &c2) in &other.terms {
                if j1 + k1 + j2 + k2 <= n {
                    *out.entry((j1 + j2, k1 + k2)).or_insert(ZERO) += c1 * c2;
                }
            }
        }
        Self::from_terms(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        self.pow_trunc(e, u32::MAX)
    }

    pub fn pow_trunc(&self, e: u32, n: u32) -> Self {
        let mut acc = Self::constant(Complex64::new(1.0, 0.0));
        for _ in 0..e {
            acc = acc.mul_trunc(self, n);
        }
        acc
    }

    /// Substitute `x -> p`, `y -> q`, keeping terms up to total degree `n`.
    pub fn compose_trunc(&self, p: &Self, q: &Self, n: u32) -> Self {
        let px = power_table(p, self.degree_x(), n);
        let qy = power_table(q, self.degree_y(), n);
        let mut out = Self::zero();
        for (&(j, k), &c) in &self.terms {
            let term = px[j as usize].mul_trunc(&qy[k as usize], n);
            out = out + term.scale(c);
        }
        out
    }

    pub fn compose(&self, p: &Self, q: &Self) -> Self {
        self.compose_trunc(p, q, u32::MAX)
    }

    /// Coefficients of the univariate polynomial `p(x0, y)` in ascending powers of `y`.
    pub fn restrict_x(&self, x0: Complex64) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.degree_y() as usize + 1];
        for ((j, k), c) in self.terms() {
            out[k as usize] += c * x0.powu(j);
        }
        out
    }

    /// Coefficients of `p(x, y0)` in ascending powers of `x`.
    pub fn restrict_y(&self, y0: Complex64) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.degree_x() as usize + 1];
        for ((j, k), c) in self.terms() {
            out[j as usize] += c * y0.powu(k);
        }
        out
    }

    /// Coefficientwise sup-norm distance.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.clone() - other.clone()).max_abs_coeff()
    }
}

fn powers(z: Complex64, n: u32) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(n as usize + 1);
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..=n {
        v.push(acc);
        acc *= z;
    }
    v
}

fn power_table(p: &BivariatePolynomial, e: u32, n: u32) -> Vec<BivariatePolynomial> {
    let mut v = Vec::with_capacity(e as usize + 1);
    let mut acc = BivariatePolynomial::constant(Complex64::new(1.0, 0.0));
    for i in 0..=e {
        v.push(acc.clone());
        if i < e {
            acc = acc.mul_trunc(p, n);
        }
    }
    v
}

impl Add for BivariatePolynomial {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for ((j, k), c) in rhs.terms {
            self.add_term(j, k, c);
        }
        self
    }
}

impl Sub for BivariatePolynomial {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for BivariatePolynomial {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn mul(self, rhs: Self) -> BivariatePolynomial {
        self.mul_trunc(rhs, u32::MAX)
    }
}

impl Mul for BivariatePolynomial {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl fmt::Debug for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|((j, k), c)| format!("({}{:+}i) x^{} y^{}", c.re, c.im, j, k))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Wire form: a list of `[j, k, re, im]` rows.
impl Serialize for BivariatePolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<(u32, u32, f64, f64)> =
            self.terms().map(|((j, k), c)| (j, k, c.re, c.im)).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BivariatePolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<serde_json::Value>::deserialize(d)?;
        let mut p = Self::zero();
        for (i, row) in rows.iter().enumerate() {
            let ((j, k), c) = parse_term(row).map_err(|m| D::Error::custom(format!("entry {i}: {m}")))?;
            p.add_term(j, k, c);
        }
        Ok(p)
    }
}

/// Validate one `[j, k, re, im]` row (imaginary part optional).
pub fn parse_term(row: &serde_json::Value) -> std::result::Result<((u32, u32), Complex64), String> {
    let arr = row.as_array().ok_or("expected an array [j, k, re, im]")?;
    if arr.len() != 3 && arr.len() != 4 {
        return Err(format!("expected 3 or 4 numbers, found {}", arr.len()));
    }
    let exp = |v: &serde_json::Value, name: &str| -> std::result::Result<u32, String> {
        match v.as_f64() {
            Some(x) if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 => Ok(x as u32),
            _ => Err(format!("exponent {name} must be a nonnegative integer, found {v}")),
        }
    };
    let num = |v: &serde_json::Value, name: &str| -> std::result::Result<f64, String> {
        v.as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("coefficient {name} must be a finite number, found {v}"))
    };
    let j = exp(&arr[0], "j")?;
    let k = exp(&arr[1], "k")?;
    let re = num(&arr[2], "re")?;
    let im = if arr.len() == 4 { num(&arr[3], "im")? } else { 0.0 };
    Ok(((j, k), Complex64::new(re, im)))
}
