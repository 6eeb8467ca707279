//! Laurent polynomials in the grading variable `t` with integer coefficients.
//!
//! A [`TPoly`] is kept as a sorted list of `(exponent, coefficient)` pairs
//! with no zero coefficients, so structural equality is polynomial equality.
//! Single-term polynomials (by far the most common coefficient in practice)
//! are stored inline without a heap allocation.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use smallvec::SmallVec;
use thiserror::Error;

use crate::int::Int;

type Terms = SmallVec<[(i32, Int); 1]>;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TPoly {
    terms: Terms,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse polynomial {input:?}: {reason}")]
pub struct ParsePolyError {
    pub input: String,
    pub reason: &'static str,
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly { terms: SmallVec::new() }
    }

    pub fn one() -> Self {
        Self::term(Int::ONE, 0)
    }

    /// `coeff * t^exp`.
    pub fn term(coeff: Int, exp: i32) -> Self {
        let mut terms = SmallVec::new();
        if !coeff.is_zero() {
            terms.push((exp, coeff));
        }
        TPoly { terms }
    }

    pub fn t_pow(exp: i32) -> Self {
        Self::term(Int::ONE, exp)
    }

    pub fn constant(c: impl Into<Int>) -> Self {
        Self::term(c.into(), 0)
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I, C>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<Int>,
    {
        let mut raw: Vec<(i32, Int)> = iter.into_iter().map(|(e, c)| (e, c.into())).collect();
        raw.sort_by_key(|(e, _)| *e);
        let mut terms: Terms = SmallVec::new();
        for (e, c) in raw {
            match terms.last_mut() {
                Some((le, lc)) if *le == e => *lc += &c,
                _ => terms.push((e, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        TPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (i32, &Int)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> Int {
        match self.terms.binary_search_by_key(&exp, |(e, _)| *e) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn constant_term(&self) -> Int {
        self.coeff(0)
    }

    /// Value at `t = 1`.
    pub fn eval_one(&self) -> Int {
        self.terms.iter().fold(Int::ZERO, |acc, (_, c)| acc + c)
    }

    /// Exact value at a nonzero rational point.
    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let p = if *e >= 0 {
                t.pow(*e)
            } else {
                t.recip().pow(-*e)
            };
            acc += p * BigRational::from_integer(c.to_bigint());
        }
        acc
    }

    /// Ring involution `t -> t^{-1}`.
    pub fn bar(&self) -> TPoly {
        let terms = self.terms.iter().rev().map(|(e, c)| (-*e, c.clone())).collect();
        TPoly { terms }
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i32) -> TPoly {
        let terms = self.terms.iter().map(|(e, c)| (*e + k, c.clone())).collect();
        TPoly { terms }
    }

    pub fn scale(&self, c: &Int) -> TPoly {
        if c.is_zero() {
            return TPoly::zero();
        }
        let terms = self.terms.iter().map(|(e, x)| (*e, x * c)).collect();
        TPoly { terms }
    }

    /// Keeps only the terms whose exponent satisfies `keep`.
    pub fn filter_exps(&self, keep: impl Fn(i32) -> bool) -> TPoly {
        let terms = self.terms.iter().filter(|(e, _)| keep(*e)).cloned().collect();
        TPoly { terms }
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.terms.iter().all(|(_, c)| !c.is_negative())
    }

    /// True when every exponent is a nonnegative even integer.
    pub fn in_even_nonnegative_powers(&self) -> bool {
        self.terms.iter().all(|(e, _)| *e >= 0 && e % 2 == 0)
    }

    fn merge(&self, rhs: &TPoly, negate_rhs: bool) -> TPoly {
        let mut out: Terms = SmallVec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &rhs.terms;
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                let c = if negate_rhs { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate_rhs { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        TPoly { terms: out }
    }

    fn add_in_place(&mut self, rhs: &TPoly, negate_rhs: bool) {
        if rhs.is_zero() {
            return;
        }
        // common case: a single term landing on an existing exponent
        if rhs.terms.len() == 1 {
            let (e, c) = &rhs.terms[0];
            match self.terms.binary_search_by_key(e, |(x, _)| *x) {
                Ok(i) => {
                    if negate_rhs {
                        self.terms[i].1 -= c;
                    } else {
                        self.terms[i].1 += c;
                    }
                    if self.terms[i].1.is_zero() {
                        self.terms.remove(i);
                    }
                }
                Err(i) => {
                    let c = if negate_rhs { -c } else { c.clone() };
                    self.terms.insert(i, (*e, c));
                }
            }
            return;
        }
        *self = self.merge(rhs, negate_rhs);
    }

    pub fn mul_ref(&self, rhs: &TPoly) -> TPoly {
        if self.is_zero() || rhs.is_zero() {
            return TPoly::zero();
        }
        if rhs.terms.len() == 1 {
            let (e, c) = &rhs.terms[0];
            return self.scale(c).shift(*e);
        }
        if self.terms.len() == 1 {
            return rhs.mul_ref(self);
        }
        let lo = self.terms[0].0 + rhs.terms[0].0;
        let hi = self.terms.last().unwrap().0 + rhs.terms.last().unwrap().0;
        let mut dense = vec![Int::ZERO; (hi - lo + 1) as usize];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let slot = &mut dense[(ea + eb - lo) as usize];
                *slot = slot.add_ref(&ca.mul_ref(cb));
            }
        }
        let terms = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (lo + k as i32, c))
            .collect();
        TPoly { terms }
    }
}

impl Add<&TPoly> for &TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        self.merge(rhs, false)
    }
}

impl Add for TPoly {
    type Output = TPoly;
    fn add(mut self, rhs: TPoly) -> TPoly {
        self.add_in_place(&rhs, false);
        self
    }
}

impl Sub<&TPoly> for &TPoly {
    type Output = TPoly;
    fn sub(self, rhs: &TPoly) -> TPoly {
        self.merge(rhs, true)
    }
}

impl Sub for TPoly {
    type Output = TPoly;
    fn sub(mut self, rhs: TPoly) -> TPoly {
        self.add_in_place(&rhs, true);
        self
    }
}

impl Mul<&TPoly> for &TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &TPoly) -> TPoly {
        self.mul_ref(rhs)
    }
}

impl Mul for TPoly {
    type Output = TPoly;
    fn mul(self, rhs: TPoly) -> TPoly {
        self.mul_ref(&rhs)
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        let terms = self.terms.iter().map(|(e, c)| (*e, -c)).collect();
        TPoly { terms }
    }
}

impl Neg for TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        -&self
    }
}

impl AddAssign<&TPoly> for TPoly {
    fn add_assign(&mut self, rhs: &TPoly) {
        self.add_in_place(rhs, false);
    }
}

impl SubAssign<&TPoly> for TPoly {
    fn sub_assign(&mut self, rhs: &TPoly) {
        self.add_in_place(rhs, true);
    }
}

impl From<i64> for TPoly {
    fn from(c: i64) -> Self {
        TPoly::constant(c)
    }
}

/// The symmetric quantum integer `[m]_t = (t^m - t^{-m}) / (t - t^{-1})`.
pub fn t_int(m: u32) -> TPoly {
    if m == 0 {
        return TPoly::zero();
    }
    let m = m as i32;
    TPoly::from_terms((0..m).map(|j| (-(m - 1) + 2 * j, 1i64)))
}

/// Symmetric Gaussian binomial `[n r]_t`; zero when `r` lies outside `0..=n`.
///
/// Built with the recurrence `[n r] = t^{-r}[n-1 r] + t^{n-r}[n-1 r-1]`.
pub fn t_binomial(n: u32, r: i64) -> TPoly {
    if r < 0 || r > n as i64 {
        return TPoly::zero();
    }
    let r = r as usize;
    let n = n as usize;
    // row[j] holds [k j] for the current k
    let mut row: Vec<TPoly> = vec![TPoly::one()];
    for k in 1..=n {
        let mut next = Vec::with_capacity(k + 1);
        for j in 0..=k {
            let mut acc = TPoly::zero();
            if j < k {
                acc += &row[j].shift(-(j as i32));
            }
            if j > 0 {
                acc += &row[j - 1].shift((k - j) as i32);
            }
            next.push(acc);
        }
        row = next;
    }
    row.swap_remove(r)
}

/// `t^{r(n-r)} [n r]_t`, the weight attached to `A^{-r}` at a site of multiplicity `n`.
pub fn site_weight(n: u32, r: u32) -> TPoly {
    t_binomial(n, r as i64).shift((r * (n - r)) as i32)
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if *e == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            if *e == 1 {
                f.write_str("t")?;
            } else {
                write!(f, "t^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TPoly({self})")
    }
}

impl FromStr for TPoly {
    type Err = ParsePolyError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParsePolyError { input: input.to_string(), reason };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty input"));
        }
        // split into signed terms; a sign directly after '^' belongs to the exponent
        let bytes = s.as_bytes();
        let mut pieces = Vec::new();
        let mut start = 0;
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                pieces.push(&s[start..i]);
                start = i;
            }
        }
        pieces.push(&s[start..]);

        let mut terms = Vec::with_capacity(pieces.len());
        for piece in pieces {
            let (neg, body) = match piece.as_bytes().first() {
                Some(b'+') => (false, &piece[1..]),
                Some(b'-') => (true, &piece[1..]),
                _ => (false, piece),
            };
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coeff, exp) = if let Some(tpos) = body.find('t') {
                let head = &body[..tpos];
                let tail = &body[tpos + 1..];
                let coeff: Int = if head.is_empty() {
                    Int::ONE
                } else {
                    let head = head.strip_suffix('*').ok_or_else(|| err("expected '*' before t"))?;
                    head.parse().map_err(|_| err("bad coefficient"))?
                };
                let exp: i32 = if tail.is_empty() {
                    1
                } else {
                    let tail = tail.strip_prefix('^').ok_or_else(|| err("expected '^' after t"))?;
                    tail.parse().map_err(|_| err("bad exponent"))?
                };
                (coeff, exp)
            } else {
                (body.parse::<Int>().map_err(|_| err("bad constant"))?, 0)
            };
            terms.push((exp, if neg { -coeff } else { coeff }));
        }
        Ok(TPoly::from_terms(terms))
    }
}

/// Ordinary binomial coefficient, used by tests and census checks.
pub fn binomial(n: u32, r: u32) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..r {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> TPoly {
        s.parse().unwrap()
    }

    #[test]
    fn ring_examples() {
        assert_eq!(p("1 + t^2") + p("-1"), p("t^2"));
        let x = p("t + t^-1");
        assert_eq!(&x * &x, p("t^-2 + 2 + t^2"));
        assert_eq!(t_binomial(2, 1).shift(1), p("1 + t^2"));
        assert_eq!(-p("1 - t"), p("-1 + t"));
        assert_eq!(p("3*t^2").scale(&Int::from(-2)), p("-6*t^2"));
    }

    #[test]
    fn bar_examples() {
        assert_eq!(p("t").bar(), p("t^-1"));
        assert_eq!(p("1 + t^2").bar(), p("1 + t^-2"));
    }

    #[test]
    fn binomial_examples() {
        for n in 0..6 {
            assert!(t_binomial(n, 0).is_one());
        }
        assert_eq!(t_binomial(2, 1), p("t^-1 + t"));
        assert_eq!(t_binomial(4, 2), p("t^-4 + t^-2 + 2 + t^2 + t^4"));
        assert!(t_binomial(3, 4).is_zero());
        assert!(t_binomial(3, -1).is_zero());
    }

    /// Evaluates the product formula `[n]![r]!^{-1}[n-r]!^{-1}` with exact
    /// rationals at a sample point, independently of the recurrence.
    fn binomial_oracle(n: u32, r: u32, t: &BigRational) -> BigRational {
        let qint = |m: u32| -> BigRational {
            let tm = t.pow(m as i32);
            (tm.clone() - tm.recip()) / (t.clone() - t.recip())
        };
        let fact = |m: u32| (1..=m).fold(BigRational::one(), |acc, j| acc * qint(j));
        fact(n) / (fact(r) * fact(n - r))
    }

    #[test]
    fn binomial_matches_rational_product_formula() {
        let points = [
            BigRational::new(2.into(), 1.into()),
            BigRational::new(3.into(), 1.into()),
            BigRational::new(1.into(), 2.into()),
            BigRational::new((-5).into(), 3.into()),
        ];
        for n in 0..=10 {
            for r in 0..=n {
                let poly = t_binomial(n, r as i64);
                for t in &points {
                    assert_eq!(poly.eval(t), binomial_oracle(n, r, t), "[{n} {r}] at {t}");
                }
            }
        }
    }

    #[test]
    fn binomial_invariants() {
        for n in 0..=12u32 {
            for r in 0..=n {
                let b = t_binomial(n, r as i64);
                assert!(b.is_bar_invariant(), "[{n} {r}] not bar invariant");
                assert_eq!(b.eval_one().to_bigint(), binomial(n, r));
                let w = site_weight(n, r);
                assert!(w.in_even_nonnegative_powers() && w.has_nonnegative_coeffs(), "{w}");
            }
        }
    }

    #[test]
    fn quantum_integer() {
        assert_eq!(t_int(3), p("t^-2 + 1 + t^2"));
        assert!(t_int(0).is_zero());
    }

    #[test]
    fn rendering() {
        assert_eq!(p("t^4 + 2 + t^-2").to_string(), "t^-2 + 2 + t^4");
        assert_eq!(TPoly::zero().to_string(), "0");
        assert_eq!(p("-t^-1").to_string(), "-t^-1");
        assert_eq!(p("1 - 3*t + t^2").to_string(), "1 - 3*t + t^2");
        assert_eq!(p("-2").to_string(), "-2");
    }

    #[test]
    fn parse_errors() {
        assert!("".parse::<TPoly>().is_err());
        assert!("1 +".parse::<TPoly>().is_err());
        assert!("2t".parse::<TPoly>().is_err());
        assert!("t^x".parse::<TPoly>().is_err());
    }

    fn arb_poly() -> impl Strategy<Value = TPoly> {
        prop::collection::vec((-8i32..8, -5i64..5), 0..6).prop_map(TPoly::from_terms)
    }

    proptest! {
        #[test]
        fn text_roundtrip(a in arb_poly()) {
            prop_assert_eq!(a.to_string().parse::<TPoly>().unwrap(), a);
        }

        #[test]
        fn bar_is_involutive_and_multiplicative(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!(a.bar().bar(), a.clone());
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        }

        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            let mut acc = a.clone();
            acc += &b;
            acc -= &c;
            prop_assert_eq!(acc, &(&a + &b) - &c);
        }
    }
}
