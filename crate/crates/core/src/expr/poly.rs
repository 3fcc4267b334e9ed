//! Canonical polynomial form behind every normalized [`Expr`](super::Expr).
//!
//! A [`Poly`] is a finite sum of rational multiples of monomials. A monomial
//! is a product of atoms raised to rational exponents, where an atom is a
//! symbol, an elementary function applied to a canonical argument, or a
//! non-monomial base held under a negative or fractional power.
//!
//! The canonical rules enforced on every construction:
//! - `tan` and `tanh` never appear; they become `sin/cos` and `sinh/cosh`.
//! - `sin(u)` and `sinh(u)` carry exponent at most one (`sin² = 1 - cos²`,
//!   `sinh² = cosh² - 1`).
//! - function arguments are sign-normalized (`sin(-u) = -sin(u)`, even
//!   functions drop the sign), so a leading coefficient is always positive.
//! - a power atom never carries a positive integer exponent; such powers are
//!   expanded. Its base is primitive, with positive leading coefficient and no
//!   common symbol factor.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use super::symbol::Symbol;

pub type Coeff = BigRational;
pub type Exponent = Rational64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "exp" => Func::Exp,
            "log" => Func::Log,
            _ => return None,
        })
    }

    pub fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tanh => x.tanh(),
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Atom {
    Sym(Symbol),
    Func(Func, Arc<Poly>),
    Pow(Arc<Poly>),
}

impl Atom {
    fn rank(&self) -> u8 {
        match self {
            Atom::Sym(_) => 0,
            Atom::Func(..) => 1,
            Atom::Pow(_) => 2,
        }
    }

    pub fn contains(&self, v: &Symbol) -> bool {
        match self {
            Atom::Sym(s) => s == v,
            Atom::Func(_, p) | Atom::Pow(p) => p.contains(v),
        }
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Atom::Sym(s) => {
                out.insert(s.clone());
            }
            Atom::Func(_, p) | Atom::Pow(p) => p.collect_symbols(out),
        }
    }

    /// The atom as a polynomial (exponent one).
    pub fn to_poly(&self) -> Poly {
        match self {
            Atom::Pow(base) => (**base).clone(),
            _ => Poly::from_monomial(Monomial::single(self.clone(), Exponent::one())),
        }
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Atom {}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Atom::Sym(a), Atom::Sym(b)) => a.cmp(b),
            (Atom::Func(f, a), Atom::Func(g, b)) => {
                if Arc::ptr_eq(a, b) {
                    f.cmp(g)
                } else {
                    a.cmp(b).then(f.cmp(g))
                }
            }
            (Atom::Pow(a), Atom::Pow(b)) => {
                if Arc::ptr_eq(a, b) {
                    Ordering::Equal
                } else {
                    a.cmp(b)
                }
            }
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl Hash for Atom {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Atom::Sym(s) => {
                0u8.hash(state);
                s.hash(state);
            }
            Atom::Func(f, p) => {
                1u8.hash(state);
                f.hash(state);
                p.hash(state);
            }
            Atom::Pow(p) => {
                2u8.hash(state);
                p.hash(state);
            }
        }
    }
}

/// Product of atoms with nonzero rational exponents, sorted by atom.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Atom, Exponent)>);

fn is_int(e: &Exponent) -> bool {
    *e.denom() == 1
}

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn single(atom: Atom, e: Exponent) -> Self {
        if e.is_zero() {
            Monomial::one()
        } else {
            Monomial(vec![(atom, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Factors must already be sorted by atom with nonzero exponents.
    pub(crate) fn from_sorted(factors: Vec<(Atom, Exponent)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        Monomial(factors)
    }

    pub fn factors(&self) -> &[(Atom, Exponent)] {
        &self.0
    }

    pub fn exponent_of_symbol(&self, v: &Symbol) -> Exponent {
        self.0
            .iter()
            .find(|(a, _)| matches!(a, Atom::Sym(s) if s == v))
            .map(|(_, e)| *e)
            .unwrap_or_else(Exponent::zero)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let e = self.0[i].1 + other.0[j].1;
                    if !e.is_zero() {
                        out.push((self.0[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn pow(&self, e: Exponent) -> Monomial {
        if e.is_zero() {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|(a, x)| (a.clone(), *x * e)).collect())
    }

    /// Divides out `other`, which must use only atoms of `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.pow(-Exponent::one()))
    }

    pub fn without_index(&self, idx: usize) -> Monomial {
        let mut v = self.0.clone();
        v.remove(idx);
        Monomial(v)
    }

    pub fn with_exponent_at(&self, idx: usize, e: Exponent) -> Monomial {
        let mut v = self.0.clone();
        if e.is_zero() {
            v.remove(idx);
        } else {
            v[idx].1 = e;
        }
        Monomial(v)
    }

    /// Splits into the factors satisfying `pred` and the rest.
    pub fn split(&self, mut pred: impl FnMut(&Atom) -> bool) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(atom, _)| pred(atom));
        (Monomial(a), Monomial(b))
    }

    pub fn contains(&self, v: &Symbol) -> bool {
        self.0.iter().any(|(a, _)| a.contains(v))
    }

    fn fixup_position(&self) -> Option<usize> {
        self.0.iter().position(|(a, e)| match a {
            Atom::Func(Func::Sin | Func::Sinh, _) => is_int(e) && *e.numer() >= 2,
            Atom::Pow(_) => is_int(e) && *e.numer() >= 1,
            _ => false,
        })
    }
}

/// Canonical sum of terms. See the module docs for the invariants.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Coeff>,
}

fn rat(n: i64) -> Coeff {
    Coeff::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(rat(n))
    }

    pub fn symbol(s: &Symbol) -> Self {
        Poly::from_monomial(Monomial::single(Atom::Sym(s.clone()), Exponent::one()))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Poly::term(Coeff::one(), m)
    }

    /// `c * m`, canonicalized.
    pub fn term(c: Coeff, m: Monomial) -> Self {
        let mut p = Poly::zero();
        p.push_term(c, m);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn leading_coefficient(&self) -> Option<&Coeff> {
        self.terms.values().next_back()
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Adds `c * m` to `self`, rewriting `m` into canonical form first.
    pub fn push_term(&mut self, c: Coeff, m: Monomial) {
        if c.is_zero() {
            return;
        }
        let Some(idx) = m.fixup_position() else {
            self.add_raw(m, c);
            return;
        };
        let (atom, e) = m.0[idx].clone();
        match &atom {
            Atom::Func(f @ (Func::Sin | Func::Sinh), arg) => {
                let rest = m.with_exponent_at(idx, e - Exponent::from_integer(2));
                let partner = if *f == Func::Sin { Func::Cos } else { Func::Cosh };
                let sq = Monomial::single(
                    Atom::Func(partner, arg.clone()),
                    Exponent::from_integer(2),
                );
                let rest_sq = rest.mul(&sq);
                if *f == Func::Sin {
                    self.push_term(c.clone(), rest);
                    self.push_term(-c, rest_sq);
                } else {
                    self.push_term(c.clone(), rest_sq);
                    self.push_term(-c, rest);
                }
            }
            Atom::Pow(base) => {
                let k = *e.numer() as u32;
                let rest = m.without_index(idx);
                let expanded = base.pow_int(k);
                for (bm, bc) in expanded.terms {
                    self.push_term(&c * bc, rest.mul(&bm));
                }
            }
            _ => unreachable!("fixup only for sin/sinh and power atoms"),
        }
    }

    fn add_raw(&mut self, m: Monomial, c: Coeff) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn pow_int(&self, k: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `self ^ e` for an exact rational exponent.
    pub fn pow(&self, e: Exponent) -> Poly {
        if e.is_zero() {
            return Poly::one();
        }
        if self.is_zero() {
            if e.is_positive() {
                return Poly::zero();
            }
            return Poly {
                terms: [(
                    Monomial::single(Atom::Pow(Arc::new(Poly::zero())), e),
                    Coeff::one(),
                )]
                .into_iter()
                .collect(),
            };
        }
        if is_int(&e) && e.is_positive() {
            return self.pow_int(*e.numer() as u32);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return match rational_power(c, e) {
                Some(ce) => Poly::term(ce, m.pow(e)),
                None if c.is_positive() => {
                    let radical = Monomial::single(Atom::Pow(Arc::new(Poly::constant(c.clone()))), e);
                    Poly::term(Coeff::one(), m.pow(e).mul(&radical))
                }
                None => Poly::from_monomial(Monomial::single(Atom::Pow(Arc::new(self.clone())), e)),
            };
        }
        // Multi-term base: pull out the common symbol factor and the content.
        let common = self.common_symbol_factor();
        let reduced = if common.is_one() {
            self.clone()
        } else {
            self.div_monomial(&common)
        };
        let content = reduced.content();
        let primitive = reduced.scale(&content.recip());
        if !is_int(&e) && content.is_negative() {
            return Poly::from_monomial(Monomial::single(Atom::Pow(Arc::new(self.clone())), e));
        }
        let atom = Poly::from_monomial(Monomial::single(Atom::Pow(Arc::new(primitive)), e));
        let scale = Poly::constant(content).pow(e);
        let factor = Poly::from_monomial(common).pow(e);
        &(&scale * &factor) * &atom
    }

    /// Rational content whose division leaves integer coprime coefficients
    /// and a positive leading coefficient.
    fn content(&self) -> Coeff {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let mut content = Coeff::new(num, den);
        if self.leading_coefficient().is_some_and(|c| c.is_negative()) {
            content = -content;
        }
        content
    }

    fn common_symbol_factor(&self) -> Monomial {
        let mut iter = self.terms.keys();
        let Some(first) = iter.next() else {
            return Monomial::one();
        };
        let mut common: Vec<(Atom, Exponent)> = first
            .0
            .iter()
            .filter(|(a, e)| matches!(a, Atom::Sym(_)) && e.is_positive())
            .cloned()
            .collect();
        for m in iter {
            common.retain_mut(|(a, e)| {
                let other = m
                    .0
                    .iter()
                    .find(|(b, _)| b == a)
                    .map(|(_, x)| *x)
                    .unwrap_or_else(Exponent::zero);
                if other.is_positive() {
                    *e = (*e).min(other);
                    true
                } else {
                    false
                }
            });
            if common.is_empty() {
                break;
            }
        }
        Monomial(common)
    }

    fn div_monomial(&self, m: &Monomial) -> Poly {
        let inv = m.pow(-Exponent::one());
        Poly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(&inv), c.clone())).collect(),
        }
    }

    /// Canonical `f(arg)`.
    pub fn func(f: Func, arg: Poly) -> Poly {
        match f {
            Func::Tan => {
                let s = Poly::func(Func::Sin, arg.clone());
                let c = Poly::func(Func::Cos, arg);
                return &s * &c.pow(-Exponent::one());
            }
            Func::Tanh => {
                let s = Poly::func(Func::Sinh, arg.clone());
                let c = Poly::func(Func::Cosh, arg);
                return &s * &c.pow(-Exponent::one());
            }
            _ => {}
        }
        if arg.is_zero() {
            match f {
                Func::Sin | Func::Sinh => return Poly::zero(),
                Func::Cos | Func::Cosh | Func::Exp => return Poly::one(),
                _ => {}
            }
        }
        if f == Func::Log {
            if arg.is_one() {
                return Poly::zero();
            }
            if let Some(inner) = arg.single_function(Func::Exp) {
                return inner;
            }
        }
        if f == Func::Exp {
            if let Some(inner) = arg.single_function(Func::Log) {
                return inner;
            }
        }
        let mut arg = arg;
        let mut sign = Coeff::one();
        if matches!(f, Func::Sin | Func::Sinh | Func::Cos | Func::Cosh)
            && arg.leading_coefficient().is_some_and(|c| c.is_negative())
        {
            arg = -arg;
            if matches!(f, Func::Sin | Func::Sinh) {
                sign = -sign;
            }
        }
        Poly::term(sign, Monomial::single(Atom::Func(f, Arc::new(arg)), Exponent::one()))
    }

    /// If `self` is exactly `f(u)`, returns `u`.
    fn single_function(&self, f: Func) -> Option<Poly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        if !c.is_one() || m.0.len() != 1 {
            return None;
        }
        match &m.0[0] {
            (Atom::Func(g, u), e) if *g == f && e.is_one() => Some((**u).clone()),
            _ => None,
        }
    }

    pub fn contains(&self, v: &Symbol) -> bool {
        self.terms.keys().any(|m| m.contains(v))
    }

    pub fn contains_any(&self, pred: &dyn Fn(&Symbol) -> bool) -> bool {
        self.symbols().iter().any(pred)
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        for m in self.terms.keys() {
            for (a, _) in &m.0 {
                a.collect_symbols(out);
            }
        }
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    /// Partial derivative with every other symbol held fixed.
    pub fn diff(&self, v: &Symbol) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (i, (atom, e)) in m.0.iter().enumerate() {
                let inner = match atom {
                    Atom::Sym(x) => {
                        if x != v {
                            continue;
                        }
                        None
                    }
                    Atom::Func(f, u) => {
                        let du = u.diff(v);
                        if du.is_zero() {
                            continue;
                        }
                        Some(&function_derivative(*f, u) * &du)
                    }
                    Atom::Pow(base) => {
                        let db = base.diff(v);
                        if db.is_zero() {
                            continue;
                        }
                        Some(db)
                    }
                };
                let ce = c * Coeff::new(BigInt::from(*e.numer()), BigInt::from(*e.denom()));
                let mono = m.with_exponent_at(i, *e - Exponent::one());
                match inner {
                    None => out.push_term(ce, mono),
                    Some(d) => {
                        for (dm, dc) in d.terms {
                            out.push_term(&ce * dc, mono.mul(&dm));
                        }
                    }
                }
            }
        }
        out
    }

    /// Simultaneous substitution of symbols.
    pub fn substitute(&self, map: &BTreeMap<Symbol, Poly>) -> Poly {
        if map.is_empty() {
            return self.clone();
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut factor = Poly::constant(c.clone());
            for (atom, e) in &m.0 {
                match substitute_atom(atom, map) {
                    None => kept.push((atom.clone(), *e)),
                    Some(p) => factor = &factor * &p.pow(*e),
                }
            }
            let kept = Monomial(kept);
            for (fm, fc) in factor.terms {
                out.push_term(fc, kept.mul(&fm));
            }
        }
        out
    }

    /// Factors that are negative powers of function or power atoms, combined
    /// into the least common denominator monomial.
    pub fn denominator(&self) -> Monomial {
        let mut mins: BTreeMap<Atom, Exponent> = BTreeMap::new();
        for m in self.terms.keys() {
            for (a, e) in &m.0 {
                if matches!(a, Atom::Sym(_)) || !e.is_negative() {
                    continue;
                }
                let entry = mins.entry(a.clone()).or_insert_with(Exponent::zero);
                if *e < *entry {
                    *entry = *e;
                }
            }
        }
        Monomial(mins.into_iter().map(|(a, e)| (a, -e)).collect())
    }

    /// Multiplies through by the common function denominator until none is
    /// left (bounded number of rounds).
    pub fn clear_denominators(&self) -> Poly {
        let mut p = self.clone();
        for _ in 0..8 {
            let d = p.denominator();
            if d.is_one() {
                break;
            }
            // exponents combine before the leftover positive powers expand
            let mut next = Poly::zero();
            for (m, c) in &p.terms {
                next.push_term(c.clone(), m.mul(&d));
            }
            p = next;
        }
        p
    }
}

fn rational_power(c: &Coeff, e: Exponent) -> Option<Coeff> {
    let (num, den) = (*e.numer(), *e.denom());
    let base = if den == 1 {
        c.clone()
    } else {
        if c.is_negative() {
            return None;
        }
        let q = den as u32;
        let rn = c.numer().nth_root(q);
        let rd = c.denom().nth_root(q);
        if num_traits::pow(rn.clone(), q as usize) != *c.numer()
            || num_traits::pow(rd.clone(), q as usize) != *c.denom()
        {
            return None;
        }
        Coeff::new(rn, rd)
    };
    let k = num.unsigned_abs() as usize;
    let p = num_traits::pow(base, k);
    if num < 0 {
        if p.is_zero() {
            return None;
        }
        Some(p.recip())
    } else {
        Some(p)
    }
}

fn function_derivative(f: Func, u: &Arc<Poly>) -> Poly {
    let atom = |g: Func| Poly::from_monomial(Monomial::single(Atom::Func(g, u.clone()), Exponent::one()));
    match f {
        Func::Sin => atom(Func::Cos),
        Func::Cos => -atom(Func::Sin),
        Func::Sinh => atom(Func::Cosh),
        Func::Cosh => atom(Func::Sinh),
        Func::Exp => atom(Func::Exp),
        Func::Log => u.pow(-Exponent::one()),
        Func::Tan | Func::Tanh => unreachable!("tan/tanh are never atoms"),
    }
}

fn substitute_atom(atom: &Atom, map: &BTreeMap<Symbol, Poly>) -> Option<Poly> {
    match atom {
        Atom::Sym(s) => map.get(s).cloned(),
        Atom::Func(f, u) => {
            if !map.keys().any(|k| u.contains(k)) {
                return None;
            }
            Some(Poly::func(*f, u.substitute(map)))
        }
        Atom::Pow(base) => {
            if !map.keys().any(|k| base.contains(k)) {
                return None;
            }
            Some(base.substitute(map))
        }
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_raw(m.clone(), c.clone());
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_raw(m.clone(), -c);
        }
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -(self.clone())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.push_term(c1 * c2, m1.mul(m2));
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}
