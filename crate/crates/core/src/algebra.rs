//! Coefficient algebras: positively ordered semirings and unital quantales.
//!
//! A [`Semiring`] is a *value* describing the algebra (so that parameterised
//! families such as [`ChainQuantale`] carry their parameter), with an
//! associated element type. Numeric instances are generic over their scalar
//! through `num-traits`; the chain quantales use exact rationals.
//!
//! All built-in instances are zerosumfree and ordered so that `zero` is the
//! bottom element. The law checker works on any implementation, including
//! user-defined ones that break these laws.

use std::fmt::{self, Debug, Display};
use std::marker::PhantomData;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Float, PrimInt, Unsigned};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::report::LawReport;

/// Default tolerance of real-valued carriers.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Fixpoint iterations over real carriers stop at `tolerance * CONVERGENCE_FACTOR`.
pub const CONVERGENCE_FACTOR: f64 = 1e-4;

/// Default bound on consumed chain elements in [`ascending_sup`].
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Above this many triples the law checker samples instead of enumerating.
pub const EXHAUSTIVE_TRIPLE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Flags {
    pub idempotent_plus: bool,
    pub finite_carrier: bool,
    pub approx: bool,
}

/// A positively ordered semiring `(S, +, 0, ·, 1, ≤)`.
pub trait Semiring: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    /// Name as spelled in automaton files (`boolean`, `chain:4`, ...).
    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn plus(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn times(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn flags(&self) -> Flags;

    fn tolerance(&self) -> f64 {
        0.0
    }

    /// Equality of elements; tolerance-based for approximate carriers.
    fn approx_eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }

    /// Stopping test for fixpoint iterations. Approximate carriers stop well
    /// inside their tolerance so that the remaining tail stays below it.
    fn converged(&self, prev: &Self::Elem, next: &Self::Elem) -> bool {
        self.approx_eq(prev, next)
    }

    /// Exact comparison with zero, so that tiny values are never dropped.
    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    /// Every element, for finite carriers.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    /// A random element, for carriers that can be sampled.
    fn sample(&self, _rng: &mut dyn RngCore) -> Option<Self::Elem> {
        None
    }

    /// The value of every countably infinite sum of nonzero elements, when
    /// that value is a single saturating top.
    ///
    /// Implementations returning `Some` must also be free of zero divisors;
    /// [`crate::KMatrix::star`] relies on both to detect divergent entries.
    fn divergent_sum(&self) -> Option<Self::Elem> {
        None
    }

    fn parse_elem(&self, text: &str) -> Option<Self::Elem>;
    fn format_elem(&self, a: &Self::Elem) -> String;

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.plus(&acc, x))
    }
}

/// A unital quantale: a semiring whose `plus` is the binary join of `leq`.
pub trait Quantale: Semiring {}

// ---------------------------------------------------------------------------
// Boolean

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Boolean;

impl Semiring for Boolean {
    type Elem = bool;

    fn name(&self) -> String {
        "boolean".into()
    }
    fn zero(&self) -> bool {
        false
    }
    fn one(&self) -> bool {
        true
    }
    fn plus(&self, a: &bool, b: &bool) -> bool {
        *a || *b
    }
    fn times(&self, a: &bool, b: &bool) -> bool {
        *a && *b
    }
    fn leq(&self, a: &bool, b: &bool) -> bool {
        !*a || *b
    }
    fn flags(&self) -> Flags {
        Flags {
            idempotent_plus: true,
            finite_carrier: true,
            approx: false,
        }
    }
    fn elements(&self) -> Option<Vec<bool>> {
        Some(vec![false, true])
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Option<bool> {
        Some(rng.gen())
    }
    fn parse_elem(&self, text: &str) -> Option<bool> {
        match text {
            "true" | "1" => Some(true),
            "false" | "0" => Some(false),
            _ => None,
        }
    }
    fn format_elem(&self, a: &bool) -> String {
        a.to_string()
    }
}

impl Quantale for Boolean {}

// ---------------------------------------------------------------------------
// Naturals with a saturating top

/// `(ℕ ∪ {∞}, +, ×)` where `T::max_value()` plays the role of `∞`.
///
/// Saturation is a semiring quotient of `ℕ∞`, so every law survives it.
pub struct NaturalSat<T>(PhantomData<fn() -> T>);

impl<T> NaturalSat<T> {
    pub const fn new() -> Self {
        Self(PhantomData)
    }
}

// Manual impls: derives would put bounds on `T`.
impl<T> Clone for NaturalSat<T> {
    fn clone(&self) -> Self {
        *self
    }
}
impl<T> Copy for NaturalSat<T> {}
impl<T> Default for NaturalSat<T> {
    fn default() -> Self {
        Self::new()
    }
}
impl<T> PartialEq for NaturalSat<T> {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl<T> Debug for NaturalSat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NaturalSat<{}>", std::any::type_name::<T>())
    }
}

/// Scalars usable as saturating naturals.
pub trait NatScalar: PrimInt + Unsigned + Debug + Display + Send + Sync {}
impl<T: PrimInt + Unsigned + Debug + Display + Send + Sync> NatScalar for T {}

fn parse_nat<T: NatScalar>(text: &str) -> Option<T> {
    match text {
        "inf" | "∞" => Some(T::max_value()),
        _ => T::from_str_radix(text, 10).ok(),
    }
}

fn format_nat<T: NatScalar>(a: &T) -> String {
    if *a == T::max_value() {
        "inf".into()
    } else {
        a.to_string()
    }
}

fn sample_nat<T: NatScalar>(rng: &mut dyn RngCore) -> T {
    match rng.gen_range(0..10) {
        0 => T::max_value(),
        1 => T::max_value() - T::from(rng.gen_range(0..4u8)).unwrap(),
        2 => T::zero(),
        _ => T::from(rng.gen_range(0..8u8)).unwrap(),
    }
}

impl<T: NatScalar> Semiring for NaturalSat<T> {
    type Elem = T;

    fn name(&self) -> String {
        "natural".into()
    }
    fn zero(&self) -> T {
        T::zero()
    }
    fn one(&self) -> T {
        T::one()
    }
    fn plus(&self, a: &T, b: &T) -> T {
        a.saturating_add(*b)
    }
    fn times(&self, a: &T, b: &T) -> T {
        // 0·∞ = 0, otherwise saturate
        a.checked_mul(b).unwrap_or_else(T::max_value)
    }
    fn leq(&self, a: &T, b: &T) -> bool {
        a <= b
    }
    fn flags(&self) -> Flags {
        Flags::default()
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Option<T> {
        Some(sample_nat(rng))
    }
    fn divergent_sum(&self) -> Option<T> {
        Some(T::max_value())
    }
    fn parse_elem(&self, text: &str) -> Option<T> {
        parse_nat(text)
    }
    fn format_elem(&self, a: &T) -> String {
        format_nat(a)
    }
}

// ---------------------------------------------------------------------------
// Tropical (min, +)

/// `(ℕ ∪ {∞}, min, +)` with zero `∞` and one `0`; ordered so that `∞` is the
/// bottom (`a ≤ b` iff `a ≥ b` numerically), making `min` the join.
pub struct TropicalMinPlus<T>(PhantomData<fn() -> T>);

impl<T> TropicalMinPlus<T> {
    pub const fn new() -> Self {
        Self(PhantomData)
    }
}

impl<T> Clone for TropicalMinPlus<T> {
    fn clone(&self) -> Self {
        *self
    }
}
impl<T> Copy for TropicalMinPlus<T> {}
impl<T> Default for TropicalMinPlus<T> {
    fn default() -> Self {
        Self::new()
    }
}
impl<T> PartialEq for TropicalMinPlus<T> {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl<T> Debug for TropicalMinPlus<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TropicalMinPlus<{}>", std::any::type_name::<T>())
    }
}

impl<T: NatScalar> Semiring for TropicalMinPlus<T> {
    type Elem = T;

    fn name(&self) -> String {
        "tropical".into()
    }
    fn zero(&self) -> T {
        T::max_value()
    }
    fn one(&self) -> T {
        T::zero()
    }
    fn plus(&self, a: &T, b: &T) -> T {
        *a.min(b)
    }
    fn times(&self, a: &T, b: &T) -> T {
        a.saturating_add(*b)
    }
    fn leq(&self, a: &T, b: &T) -> bool {
        a >= b
    }
    fn flags(&self) -> Flags {
        Flags {
            idempotent_plus: true,
            ..Flags::default()
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Option<T> {
        Some(sample_nat(rng))
    }
    fn parse_elem(&self, text: &str) -> Option<T> {
        parse_nat(text)
    }
    fn format_elem(&self, a: &T) -> String {
        format_nat(a)
    }
}

impl<T: NatScalar> Quantale for TropicalMinPlus<T> {}

// ---------------------------------------------------------------------------
// Real-valued carriers

/// Scalars usable for the real-valued carriers.
pub trait RealScalar: Float + Debug + Display + FromStr + Send + Sync {}
impl<T: Float + Debug + Display + FromStr + Send + Sync> RealScalar for T {}

fn real_approx_eq<F: RealScalar>(a: F, b: F, tol: f64) -> bool {
    if a == b {
        return true;
    }
    if a.is_infinite() || b.is_infinite() || a.is_nan() || b.is_nan() {
        return false;
    }
    let tol = F::from(tol).unwrap();
    (a - b).abs() <= tol * F::one().max(a.abs()).max(b.abs())
}

fn parse_real<F: RealScalar>(text: &str) -> Option<F> {
    match text {
        "inf" | "∞" | "+inf" => Some(F::infinity()),
        _ => text.parse::<F>().ok().filter(|x| !x.is_nan()),
    }
}

fn format_real<F: RealScalar>(a: &F) -> String {
    if a.is_infinite() {
        "inf".into()
    } else {
        a.to_string()
    }
}

/// `([0, +∞], +, ×)` with `0·∞ = 0`, compared up to a relative tolerance.
pub struct ExtNonnegReal<F> {
    tolerance: f64,
    _scalar: PhantomData<fn() -> F>,
}

impl<F> ExtNonnegReal<F> {
    pub const fn new() -> Self {
        Self::with_tolerance(DEFAULT_TOLERANCE)
    }
    pub const fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            _scalar: PhantomData,
        }
    }
}

impl<F> Clone for ExtNonnegReal<F> {
    fn clone(&self) -> Self {
        *self
    }
}
impl<F> Copy for ExtNonnegReal<F> {}
impl<F> Default for ExtNonnegReal<F> {
    fn default() -> Self {
        Self::new()
    }
}
impl<F> PartialEq for ExtNonnegReal<F> {
    fn eq(&self, other: &Self) -> bool {
        self.tolerance == other.tolerance
    }
}
impl<F> Debug for ExtNonnegReal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ExtNonnegReal<{}>(tol={})",
            std::any::type_name::<F>(),
            self.tolerance
        )
    }
}

impl<F: RealScalar> Semiring for ExtNonnegReal<F> {
    type Elem = F;

    fn name(&self) -> String {
        "real".into()
    }
    fn zero(&self) -> F {
        F::zero()
    }
    fn one(&self) -> F {
        F::one()
    }
    fn plus(&self, a: &F, b: &F) -> F {
        *a + *b
    }
    fn times(&self, a: &F, b: &F) -> F {
        if a.is_zero() || b.is_zero() {
            F::zero()
        } else {
            *a * *b
        }
    }
    fn leq(&self, a: &F, b: &F) -> bool {
        a <= b || self.approx_eq(a, b)
    }
    fn flags(&self) -> Flags {
        Flags {
            approx: true,
            ..Flags::default()
        }
    }
    fn tolerance(&self) -> f64 {
        self.tolerance
    }
    fn approx_eq(&self, a: &F, b: &F) -> bool {
        real_approx_eq(*a, *b, self.tolerance)
    }
    fn converged(&self, prev: &F, next: &F) -> bool {
        real_approx_eq(*prev, *next, self.tolerance * CONVERGENCE_FACTOR)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Option<F> {
        let x = match rng.gen_range(0..12) {
            0 => return Some(F::infinity()),
            1 => 0.0,
            2 => 1.0,
            3 => rng.gen_range(0.0..1e-3),
            _ => rng.gen_range(0.0..10.0),
        };
        F::from(x)
    }
    fn parse_elem(&self, text: &str) -> Option<F> {
        parse_real(text).filter(|x: &F| *x >= F::zero())
    }
    fn format_elem(&self, a: &F) -> String {
        format_real(a)
    }
}

/// `([0, 1], max, ×)`, the product fuzzy quantale.
pub struct UnitIntervalProduct<F> {
    tolerance: f64,
    _scalar: PhantomData<fn() -> F>,
}

impl<F> UnitIntervalProduct<F> {
    pub const fn new() -> Self {
        Self::with_tolerance(DEFAULT_TOLERANCE)
    }
    pub const fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            _scalar: PhantomData,
        }
    }
}

impl<F> Clone for UnitIntervalProduct<F> {
    fn clone(&self) -> Self {
        *self
    }
}
impl<F> Copy for UnitIntervalProduct<F> {}
impl<F> Default for UnitIntervalProduct<F> {
    fn default() -> Self {
        Self::new()
    }
}
impl<F> PartialEq for UnitIntervalProduct<F> {
    fn eq(&self, other: &Self) -> bool {
        self.tolerance == other.tolerance
    }
}
impl<F> Debug for UnitIntervalProduct<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "UnitIntervalProduct<{}>(tol={})",
            std::any::type_name::<F>(),
            self.tolerance
        )
    }
}

impl<F: RealScalar> Semiring for UnitIntervalProduct<F> {
    type Elem = F;

    fn name(&self) -> String {
        "unit-interval".into()
    }
    fn zero(&self) -> F {
        F::zero()
    }
    fn one(&self) -> F {
        F::one()
    }
    fn plus(&self, a: &F, b: &F) -> F {
        a.max(*b)
    }
    fn times(&self, a: &F, b: &F) -> F {
        *a * *b
    }
    fn leq(&self, a: &F, b: &F) -> bool {
        a <= b || self.approx_eq(a, b)
    }
    fn flags(&self) -> Flags {
        Flags {
            idempotent_plus: true,
            approx: true,
            ..Flags::default()
        }
    }
    fn tolerance(&self) -> f64 {
        self.tolerance
    }
    fn approx_eq(&self, a: &F, b: &F) -> bool {
        real_approx_eq(*a, *b, self.tolerance)
    }
    fn converged(&self, prev: &F, next: &F) -> bool {
        real_approx_eq(*prev, *next, self.tolerance * CONVERGENCE_FACTOR)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Option<F> {
        let x = match rng.gen_range(0..10) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.gen_range(0.0..1.0),
        };
        F::from(x)
    }
    fn parse_elem(&self, text: &str) -> Option<F> {
        parse_real(text).filter(|x: &F| *x >= F::zero() && *x <= F::one())
    }
    fn format_elem(&self, a: &F) -> String {
        format_real(a)
    }
}

impl<F: RealScalar> Quantale for UnitIntervalProduct<F> {}

// ---------------------------------------------------------------------------
// Finite chains

/// Multiplication offered on a finite chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChainProduct {
    /// Gödel: `x · y = min(x, y)`.
    #[default]
    Min,
    /// Łukasiewicz truncation: `x · y = max(0, x + y − 1)`.
    Lukasiewicz,
}

/// The chain `0 < 1/k < … < 1` with join `max`, elements as exact rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainQuantale {
    k: u32,
    product: ChainProduct,
}

impl ChainQuantale {
    /// # Panics
    /// If `k == 0`.
    pub fn new(k: u32) -> Self {
        Self::with_product(k, ChainProduct::Min)
    }

    pub fn with_product(k: u32, product: ChainProduct) -> Self {
        assert!(k > 0, "chain quantale needs k >= 1");
        Self { k, product }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn product(&self) -> ChainProduct {
        self.product
    }

    /// The element `level / k`.
    pub fn level(&self, level: u32) -> Ratio<u32> {
        Ratio::new(level.min(self.k), self.k)
    }

    fn level_of(&self, a: &Ratio<u32>) -> u32 {
        a.numer() * (self.k / a.denom())
    }
}

impl Semiring for ChainQuantale {
    type Elem = Ratio<u32>;

    fn name(&self) -> String {
        match self.product {
            ChainProduct::Min => format!("chain:{}", self.k),
            ChainProduct::Lukasiewicz => format!("chain:{}:lukasiewicz", self.k),
        }
    }
    fn zero(&self) -> Ratio<u32> {
        Ratio::from_integer(0)
    }
    fn one(&self) -> Ratio<u32> {
        Ratio::from_integer(1)
    }
    fn plus(&self, a: &Ratio<u32>, b: &Ratio<u32>) -> Ratio<u32> {
        *a.max(b)
    }
    fn times(&self, a: &Ratio<u32>, b: &Ratio<u32>) -> Ratio<u32> {
        match self.product {
            ChainProduct::Min => *a.min(b),
            ChainProduct::Lukasiewicz => {
                let sum = self.level_of(a) + self.level_of(b);
                self.level(sum.saturating_sub(self.k))
            }
        }
    }
    fn leq(&self, a: &Ratio<u32>, b: &Ratio<u32>) -> bool {
        a <= b
    }
    fn flags(&self) -> Flags {
        Flags {
            idempotent_plus: true,
            finite_carrier: true,
            approx: false,
        }
    }
    fn elements(&self) -> Option<Vec<Ratio<u32>>> {
        Some((0..=self.k).map(|l| self.level(l)).collect())
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Option<Ratio<u32>> {
        Some(self.level(rng.gen_range(0..=self.k)))
    }
    fn parse_elem(&self, text: &str) -> Option<Ratio<u32>> {
        let r = match text.split_once('/') {
            Some((n, d)) => {
                let d: u32 = d.parse().ok()?;
                if d == 0 {
                    return None;
                }
                Ratio::new(n.parse().ok()?, d)
            }
            None => Ratio::from_integer(text.parse().ok()?),
        };
        // must lie on the grid {j/k} within [0, 1]
        (r <= self.one() && self.k.is_multiple_of(*r.denom())).then_some(r)
    }
    fn format_elem(&self, a: &Ratio<u32>) -> String {
        a.to_string()
    }
}

impl Quantale for ChainQuantale {}

// ---------------------------------------------------------------------------
// Law checking

fn show<S: Semiring>(spec: &S, xs: &[&S::Elem]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| spec.format_elem(x)).collect();
    format!("({})", parts.join(", "))
}

fn law_values<S: Semiring>(spec: &S, samples: usize, seed: u64) -> Result<Vec<[S::Elem; 3]>> {
    if let Some(all) = spec.elements() {
        let m = all.len();
        if m.saturating_mul(m).saturating_mul(m) <= EXHAUSTIVE_TRIPLE_CAP {
            let mut out = Vec::with_capacity(m * m * m);
            for a in &all {
                for b in &all {
                    for c in &all {
                        out.push([a.clone(), b.clone(), c.clone()]);
                    }
                }
            }
            return Ok(out);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Result<S::Elem> {
        if let Some(all) = spec.elements() {
            return Ok(all[rng.gen_range(0..all.len())].clone());
        }
        spec.sample(rng)
            .ok_or_else(|| Error::SamplerMissing(spec.name()))
    };
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples.max(1) {
        out.push([draw(&mut rng)?, draw(&mut rng)?, draw(&mut rng)?]);
    }
    Ok(out)
}

/// Checks the positively-ordered-semiring laws, exhaustively on finite
/// carriers (up to [`EXHAUSTIVE_TRIPLE_CAP`] triples) and on `samples`
/// seeded random triples otherwise.
pub fn check_algebra_laws<S: Semiring>(spec: &S, samples: usize, seed: u64) -> Result<LawReport> {
    let triples = law_values(spec, samples, seed)?;
    let s = spec;
    let eq = |a: &S::Elem, b: &S::Elem| s.approx_eq(a, b);
    let zero = s.zero();
    let one = s.one();

    // Each law maps a triple to an optional witness.
    type Law<'a, E> = (&'static str, Box<dyn Fn(&E, &E, &E) -> Option<String> + 'a>);
    let mut laws: Vec<Law<'_, S::Elem>> = vec![
        (
            "plus_associative",
            Box::new(|a, b, c| {
                (!eq(&s.plus(&s.plus(a, b), c), &s.plus(a, &s.plus(b, c))))
                    .then(|| show(s, &[a, b, c]))
            }),
        ),
        (
            "plus_commutative",
            Box::new(|a, b, _| (!eq(&s.plus(a, b), &s.plus(b, a))).then(|| show(s, &[a, b]))),
        ),
        (
            "plus_identity",
            Box::new(|a, _, _| {
                (!eq(&s.plus(a, &zero), a) || !eq(&s.plus(&zero, a), a)).then(|| show(s, &[a]))
            }),
        ),
        (
            "times_associative",
            Box::new(|a, b, c| {
                (!eq(&s.times(&s.times(a, b), c), &s.times(a, &s.times(b, c))))
                    .then(|| show(s, &[a, b, c]))
            }),
        ),
        (
            "times_identity",
            Box::new(|a, _, _| {
                (!eq(&s.times(a, &one), a) || !eq(&s.times(&one, a), a)).then(|| show(s, &[a]))
            }),
        ),
        (
            "left_distributive",
            Box::new(|a, b, c| {
                (!eq(
                    &s.times(a, &s.plus(b, c)),
                    &s.plus(&s.times(a, b), &s.times(a, c)),
                ))
                .then(|| show(s, &[a, b, c]))
            }),
        ),
        (
            "right_distributive",
            Box::new(|a, b, c| {
                (!eq(
                    &s.times(&s.plus(a, b), c),
                    &s.plus(&s.times(a, c), &s.times(b, c)),
                ))
                .then(|| show(s, &[a, b, c]))
            }),
        ),
        (
            "zero_annihilates",
            Box::new(|a, _, _| {
                (!s.is_zero(&s.times(a, &zero)) || !s.is_zero(&s.times(&zero, a)))
                    .then(|| show(s, &[a]))
            }),
        ),
        (
            "zerosumfree",
            Box::new(|a, b, _| {
                (s.is_zero(&s.plus(a, b)) && !(s.is_zero(a) && s.is_zero(b)))
                    .then(|| show(s, &[a, b]))
            }),
        ),
        (
            "leq_reflexive",
            Box::new(|a, _, _| (!s.leq(a, a)).then(|| show(s, &[a]))),
        ),
        (
            "leq_transitive",
            Box::new(|a, b, c| {
                (s.leq(a, b) && s.leq(b, c) && !s.leq(a, c)).then(|| show(s, &[a, b, c]))
            }),
        ),
        (
            "leq_antisymmetric",
            Box::new(|a, b, _| (s.leq(a, b) && s.leq(b, a) && !eq(a, b)).then(|| show(s, &[a, b]))),
        ),
        (
            "zero_is_bottom",
            Box::new(|a, _, _| (!s.leq(&zero, a)).then(|| show(s, &[a]))),
        ),
        (
            "plus_monotone",
            Box::new(|a, b, c| {
                (s.leq(a, b)
                    && !(s.leq(&s.plus(a, c), &s.plus(b, c))
                        && s.leq(&s.plus(c, a), &s.plus(c, b))))
                .then(|| show(s, &[a, b, c]))
            }),
        ),
        (
            "times_monotone",
            Box::new(|a, b, c| {
                (s.leq(a, b)
                    && !(s.leq(&s.times(a, c), &s.times(b, c))
                        && s.leq(&s.times(c, a), &s.times(c, b))))
                .then(|| show(s, &[a, b, c]))
            }),
        ),
    ];
    if s.flags().idempotent_plus {
        laws.push((
            "plus_idempotent",
            Box::new(|a, _, _| (!eq(&s.plus(a, a), a)).then(|| show(s, &[a]))),
        ));
    }

    let mut report = LawReport::new();
    for (name, law) in &laws {
        let witness = triples.iter().find_map(|[a, b, c]| law(a, b, c));
        report.record(*name, witness);
    }
    Ok(report)
}

/// [`check_algebra_laws`] plus the quantale laws: `plus` is the binary join
/// of `leq` (least upper bound, hence idempotent).
pub fn check_quantale_laws<Q: Quantale>(spec: &Q, samples: usize, seed: u64) -> Result<LawReport> {
    let mut report = check_algebra_laws(spec, samples, seed)?;
    let triples = law_values(spec, samples, seed)?;
    let s = spec;
    let witness = triples.iter().find_map(|[a, b, c]| {
        let j = s.plus(a, b);
        let upper = s.leq(a, &j) && s.leq(b, &j);
        let least = !(s.leq(a, c) && s.leq(b, c)) || s.leq(&j, c);
        (!(upper && least)).then(|| show(s, &[a, b, c]))
    });
    report.record("plus_is_join", witness);
    if !s.flags().idempotent_plus {
        report.fail("quantale_flag_idempotent", s.name());
    }
    Ok(report)
}

/// Supremum of an ascending chain with the default iteration bound.
pub fn ascending_sup<S, I>(spec: &S, chain: I) -> Result<S::Elem>
where
    S: Semiring,
    I: IntoIterator<Item = S::Elem>,
{
    ascending_sup_with(spec, chain, DEFAULT_MAX_ITER)
}

/// Supremum of an ascending chain: the first element whose successor equals
/// it (on approximate carriers, within `tolerance * CONVERGENCE_FACTOR`, so
/// that a geometric tail ends up within tolerance of the limit). A finite chain yields its
/// last element and an empty one yields `zero`.
pub fn ascending_sup_with<S, I>(spec: &S, chain: I, max_iter: usize) -> Result<S::Elem>
where
    S: Semiring,
    I: IntoIterator<Item = S::Elem>,
{
    let mut it = chain.into_iter();
    let Some(mut current) = it.next() else {
        return Ok(spec.zero());
    };
    let mut consumed = 1;
    loop {
        if consumed >= max_iter {
            return Err(Error::NoConvergence {
                iterations: consumed,
            });
        }
        let Some(next) = it.next() else {
            return Ok(current);
        };
        consumed += 1;
        if !spec.leq(&current, &next) {
            return Err(Error::NotAscending {
                index: consumed - 1,
            });
        }
        if spec.converged(&current, &next) {
            return Ok(current);
        }
        current = next;
    }
}
