use alloc::collections::btree_map::Entry;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

/// A monomial: variable name to positive exponent.
///
/// Monomials order graded-lexicographically, largest first: higher total
/// degree comes first, ties go to the larger exponent on the alphabetically
/// first variable where the two differ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str) -> Self {
        let mut m = BTreeMap::new();
        m.insert(name.into(), 1);
        Monomial(m)
    }

    pub fn degree(&self) -> u64 {
        self.0.values().map(|&e| e as u64).sum()
    }

    pub fn exponent(&self, var: &str) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    /// `(variable, exponent)` pairs in name order.
    pub fn factors(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(v, &e)| (v.as_str(), e))
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            *out.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| {
            let names: BTreeSet<&String> = self.0.keys().chain(other.0.keys()).collect();
            for v in names {
                let (a, b) = (self.exponent(v), other.exponent(v));
                if a != b {
                    return b.cmp(&a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with integer coefficients, kept canonical: terms
/// sorted by [`Monomial`] order and no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Polynomial::term(c, Monomial::one())
    }

    pub fn var(name: &str) -> Self {
        Polynomial::term(1, Monomial::var(name))
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c.into());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.0.keys().cloned())
            .collect()
    }

    pub fn degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::constant(1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    pub fn square(&self) -> Polynomial {
        self.mul(self)
    }
}

/// Exact value of `p` under `assignment`.
pub fn poly_eval(p: &Polynomial, assignment: &BTreeMap<String, BigInt>) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (v, e) in m.factors() {
            let x = assignment
                .get(v)
                .ok_or_else(|| Error::domain(alloc::format!("no value for variable {v}")))?;
            t *= x.pow(e);
        }
        total += t;
    }
    Ok(total)
}

/// Finite set of equations `P = 0` over a declared variable universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiophSystem {
    equations: Vec<Polynomial>,
    universe: BTreeSet<String>,
}

impl DiophSystem {
    pub fn new(equations: Vec<Polynomial>, universe: BTreeSet<String>) -> Result<Self> {
        for p in &equations {
            if let Some(v) = p.variables().into_iter().find(|v| !universe.contains(v)) {
                return Err(Error::domain(alloc::format!(
                    "variable {v} is not declared"
                )));
            }
        }
        Ok(DiophSystem {
            equations,
            universe,
        })
    }

    /// A system whose universe is exactly the variables used.
    pub fn from_equations(equations: Vec<Polynomial>) -> Self {
        let universe = equations.iter().flat_map(Polynomial::variables).collect();
        DiophSystem {
            equations,
            universe,
        }
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn universe(&self) -> &BTreeSet<String> {
        &self.universe
    }

    /// Whether every equation vanishes under `assignment`.
    pub fn satisfied_by(&self, assignment: &BTreeMap<String, BigInt>) -> Result<bool> {
        for p in &self.equations {
            if !poly_eval(p, assignment)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `Σ Pᵢ²`, which vanishes at an integer point exactly when every `Pᵢ` does.
pub fn combine_sum_of_squares(sys: &DiophSystem) -> Result<Polynomial> {
    if sys.equations.is_empty() {
        return Err(Error::domain("cannot combine an empty system"));
    }
    Ok(sys
        .equations
        .iter()
        .fold(Polynomial::zero(), |acc, p| acc.add(&p.square())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Polynomial {
        Polynomial::var("x")
    }

    fn y() -> Polynomial {
        Polynomial::var("y")
    }

    fn at(pairs: &[(&str, i64)]) -> BTreeMap<String, BigInt> {
        pairs
            .iter()
            .map(|&(v, c)| (v.into(), BigInt::from(c)))
            .collect()
    }

    #[test]
    fn canonical_form() {
        let p = x().add(&Polynomial::constant(-1)).square();
        let q = x()
            .square()
            .sub(&x().mul(&Polynomial::constant(2)))
            .add(&Polynomial::constant(1));
        assert_eq!(p, q);
        assert!(x().sub(&x()).is_zero());
        let degrees: Vec<u64> = p.terms().map(|(m, _)| m.degree()).collect();
        assert_eq!(degrees, [2, 1, 0]);
        let mixed = x().mul(&y()).add(&x().square()).add(&y().square());
        let order: Vec<(u32, u32)> = mixed
            .terms()
            .map(|(m, _)| (m.exponent("x"), m.exponent("y")))
            .collect();
        assert_eq!(order, [(2, 0), (1, 1), (0, 2)]);
    }

    #[test]
    fn evaluation() {
        let pell = x()
            .square()
            .sub(&y().square().mul(&Polynomial::constant(3)))
            .sub(&Polynomial::constant(1));
        assert_eq!(
            poly_eval(&pell, &at(&[("x", 7), ("y", 4)])).unwrap(),
            BigInt::zero()
        );
        assert_eq!(
            poly_eval(&pell, &at(&[("x", 2), ("y", 2)])).unwrap(),
            BigInt::from(-9)
        );
        let sq = x().sub(&Polynomial::constant(1)).square();
        assert_eq!(poly_eval(&sq, &at(&[("x", 1)])).unwrap(), BigInt::zero());
        assert!(matches!(
            poly_eval(&pell, &at(&[("x", 1)])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn systems() {
        let eqs = alloc::vec![
            x().sub(&Polynomial::constant(1)),
            y().sub(&Polynomial::constant(2))
        ];
        let sys = DiophSystem::from_equations(eqs.clone());
        let combined = combine_sum_of_squares(&sys).unwrap();
        for a in 0..10 {
            for b in 0..10 {
                let v = poly_eval(&combined, &at(&[("x", a), ("y", b)])).unwrap();
                assert_eq!(v.is_zero(), (a, b) == (1, 2));
            }
        }
        let only_x: BTreeSet<String> = ["x".into()].into_iter().collect();
        assert!(DiophSystem::new(eqs, only_x).is_err());
        assert!(combine_sum_of_squares(&DiophSystem::from_equations(Vec::new())).is_err());
    }
}
