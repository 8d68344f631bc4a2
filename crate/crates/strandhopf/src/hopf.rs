//! The Hopf algebra of 2-graphs: product by disjoint union, coproduct by
//! subgraph contraction, counit, antipode with formal residue inverses,
//! characters with values in Laurent polynomials and the counterterm recursion.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::graph_core::{GraphResult, TwoGraph};
use crate::iso::{self, CanonicalCode};
use crate::models::{self, Theory};

/// A product of connected 2-graphs and formal inverses of residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    graphs: Vec<CanonicalCode>,
    inverses: Vec<CanonicalCode>,
}

/// A residue: a single vertex without edges.
fn is_residue(code: &CanonicalCode) -> bool {
    code.num_components() == 1 && code.num_edges() == 0 && code.num_vertices() == 1
}

impl Monomial {
    /// The empty product `𝟙`.
    pub fn one() -> Self {
        Monomial::default()
    }

    /// Monomial of a (possibly disconnected) graph code.
    pub fn from_code(code: &CanonicalCode) -> Self {
        let mut graphs = code.components();
        graphs.sort();
        Monomial { graphs, inverses: Vec::new() }
    }

    pub fn from_graph(g: &TwoGraph) -> Self {
        Monomial::from_code(&iso::canonical_form(g))
    }

    /// `r⁻¹` for a residue `r`.
    pub fn residue_inverse(r: &CanonicalCode) -> Self {
        assert!(is_residue(r), "only residues have formal inverses");
        Monomial { graphs: Vec::new(), inverses: vec![r.clone()] }
    }

    pub fn graphs(&self) -> &[CanonicalCode] {
        &self.graphs
    }

    pub fn inverses(&self) -> &[CanonicalCode] {
        &self.inverses
    }

    pub fn is_one(&self) -> bool {
        self.graphs.is_empty() && self.inverses.is_empty()
    }

    /// Code of the product of the graph factors.
    pub fn graph_code(&self) -> CanonicalCode {
        CanonicalCode::union(&self.graphs)
    }

    pub fn num_edges(&self) -> usize {
        self.graphs.iter().map(|g| g.num_edges()).sum()
    }

    /// Product with `r · r⁻¹` cancelled.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut graphs: Vec<CanonicalCode> = self.graphs.iter().chain(&other.graphs).cloned().collect();
        let mut inverses: Vec<CanonicalCode> = Vec::new();
        for r in self.inverses.iter().chain(&other.inverses) {
            if let Some(p) = graphs.iter().position(|g| g == r) {
                graphs.swap_remove(p);
            } else {
                inverses.push(r.clone());
            }
        }
        graphs.sort();
        inverses.sort();
        Monomial { graphs, inverses }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .graphs
            .iter()
            .map(|g| g.to_hex())
            .chain(self.inverses.iter().map(|r| format!("inv({})", r.to_hex())))
            .collect();
        f.write_str(&parts.join("*"))
    }
}

fn add_term<K: Ord>(map: &mut BTreeMap<K, BigRational>, k: K, q: BigRational) {
    if q.is_zero() {
        return;
    }
    let e = map.entry(k).or_insert_with(BigRational::zero);
    *e += q;
}

fn prune<K: Ord + Clone>(map: &mut BTreeMap<K, BigRational>) {
    map.retain(|_, q| !q.is_zero());
}

/// A finite rational combination of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Monomial, BigRational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    /// `q · 𝟙`.
    pub fn unit(q: BigRational) -> Self {
        AlgebraElement::from_monomial(Monomial::one(), q)
    }

    pub fn one() -> Self {
        AlgebraElement::unit(BigRational::one())
    }

    pub fn from_monomial(m: Monomial, q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        add_term(&mut terms, m, q);
        AlgebraElement { terms }
    }

    pub fn from_graph(g: &TwoGraph) -> Self {
        AlgebraElement::from_monomial(Monomial::from_graph(g), BigRational::one())
    }

    pub fn from_code(c: &CanonicalCode) -> Self {
        AlgebraElement::from_monomial(Monomial::from_code(c), BigRational::one())
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut terms = self.terms.clone();
        for (m, q) in &other.terms {
            add_term(&mut terms, m.clone(), q.clone());
        }
        prune(&mut terms);
        AlgebraElement { terms }
    }

    pub fn scale(&self, q: &BigRational) -> AlgebraElement {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            add_term(&mut terms, m.clone(), c * q);
        }
        AlgebraElement { terms }
    }

    pub fn product(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut terms = BTreeMap::new();
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                add_term(&mut terms, a.mul(b), p * q);
            }
        }
        prune(&mut terms);
        AlgebraElement { terms }
    }
}

/// An element of the tensor square.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Tensor {
    terms: BTreeMap<(Monomial, Monomial), BigRational>,
}

impl Tensor {
    pub fn terms(&self) -> &BTreeMap<(Monomial, Monomial), BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, l: &Monomial, r: &Monomial) -> BigRational {
        self.terms.get(&(l.clone(), r.clone())).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        let mut terms = self.terms.clone();
        for (k, q) in &other.terms {
            add_term(&mut terms, k.clone(), q.clone());
        }
        prune(&mut terms);
        Tensor { terms }
    }

    pub fn product(&self, other: &Tensor) -> Tensor {
        let mut terms = BTreeMap::new();
        for ((a, b), p) in &self.terms {
            for ((c, d), q) in &other.terms {
                add_term(&mut terms, (a.mul(c), b.mul(d)), p * q);
            }
        }
        prune(&mut terms);
        Tensor { terms }
    }

    /// `m ∘ (f ⊗ g)`.
    pub fn contract_with(
        &self,
        f: impl Fn(&Monomial) -> AlgebraElement,
        g: impl Fn(&Monomial) -> AlgebraElement,
    ) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for ((a, b), q) in &self.terms {
            out = out.add(&f(a).product(&g(b)).scale(q));
        }
        out
    }
}

/// An element of the triple tensor power (for coassociativity checks).
pub type Tensor3 = BTreeMap<(Monomial, Monomial, Monomial), BigRational>;

type Rows = Arc<Vec<((Monomial, Monomial), BigRational)>>;

/// Memoized coproduct and antipode of connected generators.
#[derive(Default)]
pub struct HopfCache {
    delta: RwLock<HashMap<CanonicalCode, Rows>>,
    antipode: RwLock<HashMap<CanonicalCode, AlgebraElement>>,
}

impl HopfCache {
    pub fn new() -> Self {
        HopfCache::default()
    }

    fn delta_connected(&self, code: &CanonicalCode) -> Rows {
        if let Some(r) = self.delta.read().expect("cache lock").get(code) {
            return r.clone();
        }
        let g = code.decode_two_graph().expect("valid code");
        let e = g.num_edges();
        let mut acc: BTreeMap<(Monomial, Monomial), BigRational> = BTreeMap::new();
        for m in 0..1u64 << e {
            let mask: Vec<bool> = (0..e).map(|k| m >> k & 1 == 1).collect();
            let theta = g.edge_subgraph(&mask);
            let q = g.contract_edge_mask(&mask);
            add_term(&mut acc, (Monomial::from_graph(&theta), Monomial::from_graph(&q)), BigRational::one());
        }
        let rows: Rows = Arc::new(acc.into_iter().collect());
        self.delta.write().expect("cache lock").entry(code.clone()).or_insert(rows).clone()
    }

    /// Coproduct of a monomial; residue inverses are group-like.
    pub fn coproduct_monomial(&self, m: &Monomial) -> Tensor {
        let mut t = Tensor { terms: BTreeMap::from([((Monomial::one(), Monomial::one()), BigRational::one())]) };
        for g in &m.graphs {
            let rows = self.delta_connected(g);
            t = t.product(&Tensor { terms: rows.iter().cloned().collect() });
        }
        for r in &m.inverses {
            let inv = Monomial::residue_inverse(r);
            t = t.product(&Tensor { terms: BTreeMap::from([((inv.clone(), inv), BigRational::one())]) });
        }
        t
    }

    pub fn coproduct(&self, x: &AlgebraElement) -> Tensor {
        let mut out = Tensor::default();
        for (m, q) in &x.terms {
            let mut t = self.coproduct_monomial(m);
            for v in t.terms.values_mut() {
                *v *= q;
            }
            out = out.add(&t);
        }
        out
    }

    fn antipode_connected(&self, code: &CanonicalCode) -> AlgebraElement {
        if is_residue(code) {
            return AlgebraElement::from_monomial(Monomial::residue_inverse(code), BigRational::one());
        }
        if let Some(s) = self.antipode.read().expect("cache lock").get(code) {
            return s.clone();
        }
        // the rows of the coproduct are the subgraph/quotient pairs; the row with
        // Θ = Γ carries the residue and is the only one with all edges on the left
        let whole = Monomial::from_code(code);
        let mut sum = AlgebraElement::zero();
        let mut res = None;
        for ((theta, quotient), q) in self.delta_connected(code).iter() {
            if *theta == whole {
                res = quotient.graphs.first().cloned();
                continue;
            }
            let right = AlgebraElement::from_monomial(quotient.clone(), q.clone());
            sum = sum.add(&self.antipode_monomial(theta).product(&right));
        }
        let res = res.expect("coproduct contains the term with the whole graph");
        let s = sum
            .product(&AlgebraElement::from_monomial(Monomial::residue_inverse(&res), BigRational::one()))
            .scale(&-BigRational::one());
        self.antipode.write().expect("cache lock").entry(code.clone()).or_insert(s).clone()
    }

    /// Antipode of a monomial (multiplicative; `S(r⁻¹) = r`).
    pub fn antipode_monomial(&self, m: &Monomial) -> AlgebraElement {
        let mut out = AlgebraElement::one();
        for g in &m.graphs {
            out = out.product(&self.antipode_connected(g));
        }
        for r in &m.inverses {
            out = out.product(&AlgebraElement::from_code(r));
        }
        out
    }

    pub fn antipode(&self, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m, q) in &x.terms {
            out = out.add(&self.antipode_monomial(m).scale(q));
        }
        out
    }
}

/// The process-wide cache used by the free functions.
pub fn cache() -> &'static HopfCache {
    static CACHE: OnceLock<HopfCache> = OnceLock::new();
    CACHE.get_or_init(HopfCache::new)
}

pub fn product(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    a.product(b)
}

pub fn unit(q: BigRational) -> AlgebraElement {
    AlgebraElement::unit(q)
}

pub fn coproduct(x: &AlgebraElement) -> Tensor {
    cache().coproduct(x)
}

pub fn coproduct_graph(g: &TwoGraph) -> Tensor {
    coproduct(&AlgebraElement::from_graph(g))
}

pub fn antipode(x: &AlgebraElement) -> AlgebraElement {
    cache().antipode(x)
}

pub fn antipode_graph(g: &TwoGraph) -> AlgebraElement {
    antipode(&AlgebraElement::from_graph(g))
}

/// `ε`: 1 on monomials whose graph factors are edgeless, 0 otherwise.
pub fn counit_monomial(m: &Monomial) -> BigRational {
    if m.graphs.iter().all(|g| g.num_edges() == 0) {
        BigRational::one()
    } else {
        BigRational::zero()
    }
}

pub fn counit(x: &AlgebraElement) -> BigRational {
    x.terms.iter().map(|(m, q)| counit_monomial(m) * q).sum()
}

/// `u ∘ ε`.
pub fn unit_counit(x: &AlgebraElement) -> AlgebraElement {
    AlgebraElement::unit(counit(x))
}

/// Coproduct of a graph summed over all subgraphs of the whole graph, without
/// factoring into components first.
pub fn coproduct_by_subgraphs(g: &TwoGraph) -> Tensor {
    let e = g.num_edges();
    let mut terms = BTreeMap::new();
    for m in 0..1u64 << e {
        let mask: Vec<bool> = (0..e).map(|k| m >> k & 1 == 1).collect();
        let key = (Monomial::from_graph(&g.edge_subgraph(&mask)), Monomial::from_graph(&g.contract_edge_mask(&mask)));
        add_term(&mut terms, key, BigRational::one());
    }
    Tensor { terms }
}

/// Outcome of the Hopf axiom checks on one graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub coassociative: bool,
    pub counit: bool,
    pub bialgebra: bool,
    pub antipode: bool,
}

impl AxiomCheck {
    pub fn all(&self) -> bool {
        self.coassociative && self.counit && self.bialgebra && self.antipode
    }
}

/// Checks coassociativity, both counit identities, compatibility of the
/// coproduct with disjoint union and both antipode identities on `g`.
pub fn check_axioms(g: &TwoGraph) -> AxiomCheck {
    let x = AlgebraElement::from_graph(g);
    let direct = coproduct_by_subgraphs(g);
    let bialgebra = direct == coproduct(&x);
    let (l, r) = counit_sides(&x);
    let counit = l == x && r == x;
    let coassociative = coproduct_left(&x) == coproduct_right(&x);
    let c = cache();
    let one = |m: &Monomial| AlgebraElement::from_monomial(m.clone(), BigRational::one());
    let ue = unit_counit(&x);
    let antipode = direct.contract_with(|m| c.antipode_monomial(m), one) == ue
        && direct.contract_with(one, |m| c.antipode_monomial(m)) == ue;
    AxiomCheck { coassociative, counit, bialgebra, antipode }
}

/// `(Δ ⊗ id) Δ x`.
pub fn coproduct_left(x: &AlgebraElement) -> Tensor3 {
    let mut out = Tensor3::new();
    for ((a, b), q) in coproduct(x).terms {
        for ((a1, a2), p) in cache().coproduct_monomial(&a).terms {
            add_term(&mut out, (a1, a2, b.clone()), &q * p);
        }
    }
    prune(&mut out);
    out
}

/// `(id ⊗ Δ) Δ x`.
pub fn coproduct_right(x: &AlgebraElement) -> Tensor3 {
    let mut out = Tensor3::new();
    for ((a, b), q) in coproduct(x).terms {
        for ((b1, b2), p) in cache().coproduct_monomial(&b).terms {
            add_term(&mut out, (a.clone(), b1, b2), &q * p);
        }
    }
    prune(&mut out);
    out
}

/// `(ε ⊗ id) Δ x` and `(id ⊗ ε) Δ x`.
pub fn counit_sides(x: &AlgebraElement) -> (AlgebraElement, AlgebraElement) {
    let t = coproduct(x);
    let mut l = AlgebraElement::zero();
    let mut r = AlgebraElement::zero();
    for ((a, b), q) in &t.terms {
        l = l.add(&AlgebraElement::from_monomial(b.clone(), counit_monomial(a) * q));
        r = r.add(&AlgebraElement::from_monomial(a.clone(), counit_monomial(b) * q));
    }
    (l, r)
}

/// `m ∘ (S ⊗ id) ∘ Δ` and `m ∘ (id ⊗ S) ∘ Δ`.
pub fn antipode_sides(x: &AlgebraElement) -> (AlgebraElement, AlgebraElement) {
    let t = coproduct(x);
    let c = cache();
    let one = |m: &Monomial| AlgebraElement::from_monomial(m.clone(), BigRational::one());
    (t.contract_with(|m| c.antipode_monomial(m), one), t.contract_with(one, |m| c.antipode_monomial(m)))
}

// ---------------------------------------------------------------------------
// target algebras and characters
// ---------------------------------------------------------------------------

/// A commutative unital algebra over the rationals.
pub trait Target: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, q: &BigRational) -> Self;
}

/// Laurent polynomials in one regulator `z` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default, PartialOrd, Ord, Hash)]
pub struct Laurent {
    coeffs: BTreeMap<i32, BigRational>,
}

impl Laurent {
    pub fn monomial(power: i32, q: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !q.is_zero() {
            coeffs.insert(power, q);
        }
        Laurent { coeffs }
    }

    pub fn from_terms(terms: &[(i32, BigRational)]) -> Self {
        let mut l = Laurent::default();
        for (p, q) in terms {
            l = l.add(&Laurent::monomial(*p, q.clone()));
        }
        l
    }

    pub fn coefficient(&self, power: i32) -> BigRational {
        self.coeffs.get(&power).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<i32, BigRational> {
        &self.coeffs
    }

    /// Projection onto strictly negative powers.
    pub fn pole_part(&self) -> Laurent {
        Laurent { coeffs: self.coeffs.range(..0).map(|(k, v)| (*k, v.clone())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl Target for Laurent {
    fn zero() -> Self {
        Laurent::default()
    }
    fn one() -> Self {
        Laurent::monomial(0, BigRational::one())
    }
    fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (k, v) in &other.coeffs {
            add_term(&mut coeffs, *k, v.clone());
        }
        prune(&mut coeffs);
        Laurent { coeffs }
    }
    fn mul(&self, other: &Self) -> Self {
        let mut coeffs = BTreeMap::new();
        for (a, p) in &self.coeffs {
            for (b, q) in &other.coeffs {
                add_term(&mut coeffs, a + b, p * q);
            }
        }
        prune(&mut coeffs);
        Laurent { coeffs }
    }
    fn scale(&self, q: &BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, v) in &self.coeffs {
            add_term(&mut coeffs, *k, v * q);
        }
        Laurent { coeffs }
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(k, v)| format!("({v})z^{k}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A linear map from the algebra to a target, given on monomials.
pub trait LinearMap<T: Target>: Sync {
    fn on_monomial(&self, m: &Monomial) -> T;

    fn apply(&self, x: &AlgebraElement) -> T {
        x.terms.iter().fold(T::zero(), |acc, (m, q)| acc.add(&self.on_monomial(m).scale(q)))
    }
}

/// An algebra homomorphism determined by its values on connected graphs with
/// edges; residues and their inverses go to the unit.
pub struct Character<T: Target> {
    eval: Box<dyn Fn(&CanonicalCode) -> T + Send + Sync>,
}

impl<T: Target> Character<T> {
    pub fn new(eval: impl Fn(&CanonicalCode) -> T + Send + Sync + 'static) -> Self {
        Character { eval: Box::new(eval) }
    }

    /// Value on a connected graph code.
    pub fn on_connected(&self, code: &CanonicalCode) -> T {
        if code.num_edges() == 0 {
            T::one()
        } else {
            (self.eval)(code)
        }
    }

    pub fn on_graph(&self, g: &TwoGraph) -> T {
        self.on_monomial(&Monomial::from_graph(g))
    }
}

impl<T: Target> LinearMap<T> for Character<T> {
    fn on_monomial(&self, m: &Monomial) -> T {
        m.graphs.iter().fold(T::one(), |acc, g| acc.mul(&self.on_connected(g)))
    }
}

/// `u_A ∘ ε`.
pub struct UnitCounit;

impl<T: Target> LinearMap<T> for UnitCounit {
    fn on_monomial(&self, m: &Monomial) -> T {
        T::one().scale(&counit_monomial(m))
    }
}

/// `φ * ψ = m_A ∘ (φ ⊗ ψ) ∘ Δ`.
pub struct Convolution<'a, T: Target> {
    pub left: &'a dyn LinearMap<T>,
    pub right: &'a dyn LinearMap<T>,
}

impl<T: Target> LinearMap<T> for Convolution<'_, T> {
    fn on_monomial(&self, m: &Monomial) -> T {
        cache().coproduct_monomial(m).terms.iter().fold(T::zero(), |acc, ((a, b), q)| {
            acc.add(&self.left.on_monomial(a).mul(&self.right.on_monomial(b)).scale(q))
        })
    }
}

pub fn convolve<'a, T: Target>(left: &'a dyn LinearMap<T>, right: &'a dyn LinearMap<T>) -> Convolution<'a, T> {
    Convolution { left, right }
}

/// `S^φ = φ ∘ S`.
pub struct CharacterInverse<'a, T: Target> {
    pub phi: &'a Character<T>,
}

impl<T: Target> LinearMap<T> for CharacterInverse<'_, T> {
    fn on_monomial(&self, m: &Monomial) -> T {
        self.phi.apply(&cache().antipode_monomial(m))
    }
}

pub fn character_inverse<T: Target>(phi: &Character<T>) -> CharacterInverse<'_, T> {
    CharacterInverse { phi }
}

/// A linear operator on the target.
pub trait RotaBaxterOp<T: Target>: Sync {
    fn apply(&self, x: &T) -> T;
}

/// Projection onto the pole part.
pub struct PolePart;

impl RotaBaxterOp<Laurent> for PolePart {
    fn apply(&self, x: &Laurent) -> Laurent {
        x.pole_part()
    }
}

/// The zero operator.
pub struct ZeroOp;

impl<T: Target> RotaBaxterOp<T> for ZeroOp {
    fn apply(&self, _x: &T) -> T {
        T::zero()
    }
}

/// `R(x)R(y) = R(R(x)y) + R(xR(y)) - R(xy)`.
pub fn rota_baxter_holds<T: Target>(r: &dyn RotaBaxterOp<T>, x: &T, y: &T) -> bool {
    let lhs = r.apply(x).mul(&r.apply(y));
    let rhs = r
        .apply(&r.apply(x).mul(y))
        .add(&r.apply(&x.mul(&r.apply(y))))
        .add(&r.apply(&x.mul(y)).scale(&-BigRational::one()));
    lhs == rhs
}

/// Counterterms `S^φ_R` by recursion over the edge grading; the subgraph sum
/// runs over subgraphs other than the skeleton and the graph itself.
pub struct Counterterm<'a, T: Target> {
    phi: &'a Character<T>,
    r: &'a dyn RotaBaxterOp<T>,
    memo: RwLock<HashMap<CanonicalCode, T>>,
}

impl<'a, T: Target + Send + Sync> Counterterm<'a, T> {
    pub fn new(phi: &'a Character<T>, r: &'a dyn RotaBaxterOp<T>) -> Self {
        Counterterm { phi, r, memo: RwLock::new(HashMap::new()) }
    }

    fn connected(&self, code: &CanonicalCode) -> T {
        if code.num_edges() == 0 {
            return T::one();
        }
        if let Some(v) = self.memo.read().expect("memo lock").get(code) {
            return v.clone();
        }
        let g = code.decode_two_graph().expect("valid code");
        let e = g.num_edges();
        let mut bar = self.phi.on_connected(code);
        for m in 1..(1u64 << e) - 1 {
            let mask: Vec<bool> = (0..e).map(|k| m >> k & 1 == 1).collect();
            let theta = Monomial::from_graph(&g.edge_subgraph(&mask));
            let q = self.phi.on_graph(&g.contract_edge_mask(&mask));
            bar = bar.add(&self.on_monomial(&theta).mul(&q));
        }
        let v = self.r.apply(&bar).scale(&-BigRational::one());
        self.memo.write().expect("memo lock").entry(code.clone()).or_insert(v).clone()
    }
}

impl<T: Target + Send + Sync> LinearMap<T> for Counterterm<'_, T> {
    fn on_monomial(&self, m: &Monomial) -> T {
        m.graphs.iter().fold(T::one(), |acc, g| acc.mul(&self.connected(g)))
    }
}

pub fn counterterm<T: Target + Send + Sync>(phi: &Character<T>, r: &dyn RotaBaxterOp<T>, g: &TwoGraph) -> T {
    Counterterm::new(phi, r).on_monomial(&Monomial::from_graph(g))
}

/// `(S^φ_R * φ)(Γ)`.
pub fn renormalized<T: Target + Send + Sync>(phi: &Character<T>, r: &dyn RotaBaxterOp<T>, g: &TwoGraph) -> T {
    let s = Counterterm::new(phi, r);
    convolve(&s, phi).on_monomial(&Monomial::from_graph(g))
}

/// Toy minimal-subtraction scheme: `φ(Γ) = z^{-(ω+1)}` for `ω = ω^sd(Γ) ≥ 0`,
/// `1` for convergent graphs, with `R` the pole-part projection.
pub fn toy_ms_character(theory: &Theory) -> (Character<Laurent>, PolePart) {
    let t = theory.clone();
    let phi = Character::new(move |code: &CanonicalCode| {
        let g = code.decode_two_graph().expect("valid code");
        match models::superficial_degree(&t, &g) {
            Ok(w) if !w.is_negative() => {
                let p = w.floor().to_integer().to_i32().expect("small degree");
                Laurent::monomial(-(p + 1), BigRational::one())
            }
            _ => Laurent::one(),
        }
    });
    (phi, PolePart)
}

/// Serializable list of terms.
#[derive(Clone, Debug, Serialize)]
pub struct TermRow {
    pub left: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub left_inverses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right_inverses: Option<Vec<String>>,
    pub coefficient: String,
}

fn hexes(v: &[CanonicalCode]) -> Vec<String> {
    v.iter().map(|c| c.to_hex()).collect()
}

pub fn element_rows(x: &AlgebraElement) -> Vec<TermRow> {
    x.terms
        .iter()
        .map(|(m, q)| TermRow {
            left: hexes(&m.graphs),
            left_inverses: hexes(&m.inverses),
            right: None,
            right_inverses: None,
            coefficient: q.to_string(),
        })
        .collect()
}

pub fn tensor_rows(t: &Tensor) -> Vec<TermRow> {
    t.terms
        .iter()
        .map(|((a, b), q)| TermRow {
            left: hexes(&a.graphs),
            left_inverses: hexes(&a.inverses),
            right: Some(hexes(&b.graphs)),
            right_inverses: Some(hexes(&b.inverses)),
            coefficient: q.to_string(),
        })
        .collect()
}

/// Characters as tables `code → Laurent coefficients`.
pub fn character_table(phi: &Character<Laurent>, codes: &[CanonicalCode]) -> BTreeMap<String, BTreeMap<i32, String>> {
    codes
        .iter()
        .map(|c| (c.to_hex(), phi.on_connected(c).coeffs().iter().map(|(k, v)| (*k, v.to_string())).collect()))
        .collect()
}

/// Integer rational helper.
pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Applies a linear map to a graph.
pub fn apply_to_graph<T: Target>(f: &dyn LinearMap<T>, g: &TwoGraph) -> GraphResult<T> {
    Ok(f.on_monomial(&Monomial::from_graph(g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn mono(g: &TwoGraph) -> Monomial {
        Monomial::from_graph(g)
    }

    #[test]
    fn residue_inverse_cancels() {
        let r = iso::canonical_form(&fixtures::polygon_vertex(4));
        let a = AlgebraElement::from_code(&r);
        let b = AlgebraElement::from_monomial(Monomial::residue_inverse(&r), BigRational::one());
        assert_eq!(a.product(&b), AlgebraElement::one());
        let g = AlgebraElement::from_graph(&fixtures::matrix_fish());
        assert_eq!(g.product(&AlgebraElement::one()), g);
    }

    #[test]
    fn fish_coproduct_three_terms() {
        let g = fixtures::fish(false);
        let t = coproduct_graph(&g);
        assert_eq!(t.len(), 3);
        let skeleton = mono(&g.skeleton());
        assert_eq!(t.coefficient(&skeleton, &mono(&g)), rational(1));
        assert_eq!(t.coefficient(&mono(&g), &mono(&g.residue())), rational(1));
        let mut m = vec![true, false];
        let h1 = g.edge_subgraph(&m);
        let q1 = g.contract_edge_mask(&m);
        assert_eq!(t.coefficient(&mono(&h1), &mono(&q1)), rational(2));
        m = vec![false, true];
        assert!(iso::are_isomorphic(&h1, &g.edge_subgraph(&m)));
    }

    #[test]
    fn residues_are_group_like() {
        let r = fixtures::polygon_vertex(4);
        let t = coproduct_graph(&r);
        assert_eq!(t.len(), 1);
        assert_eq!(t.coefficient(&mono(&r), &mono(&r)), rational(1));
        let one = coproduct(&AlgebraElement::one());
        assert_eq!(one.coefficient(&Monomial::one(), &Monomial::one()), rational(1));
    }

    #[test]
    fn counit_values() {
        assert_eq!(counit(&AlgebraElement::from_graph(&fixtures::polygon_vertex(4))), rational(1));
        assert_eq!(counit(&AlgebraElement::from_graph(&fixtures::fish(true))), rational(0));
        assert_eq!(counit(&AlgebraElement::one()), rational(1));
    }

    #[test]
    fn antipode_on_fixtures() {
        let r = fixtures::polygon_vertex(4);
        let code = iso::canonical_form(&r);
        assert_eq!(antipode_graph(&r), AlgebraElement::from_monomial(Monomial::residue_inverse(&code), rational(1)));
        assert_eq!(antipode(&AlgebraElement::one()), AlgebraElement::one());
        for (_, g) in fixtures::corpus() {
            if g.num_edges() > 4 {
                continue;
            }
            let x = AlgebraElement::from_graph(&g);
            let (l, rr) = antipode_sides(&x);
            assert_eq!(l, unit_counit(&x));
            assert_eq!(rr, unit_counit(&x));
        }
    }

    #[test]
    fn convolution_identities() {
        let (phi, _) = toy_ms_character(&crate::models::Theory::bgr());
        let inv = character_inverse(&phi);
        let fish = fixtures::fish(false);
        let c = convolve(&inv, &phi);
        assert_eq!(c.on_monomial(&mono(&fish)), Laurent::zero());
        assert_eq!(c.on_monomial(&mono(&fixtures::polygon_vertex(4))), Laurent::one());
        let u = UnitCounit;
        let c2 = convolve(&u, &phi);
        assert_eq!(c2.on_monomial(&mono(&fish)), phi.on_graph(&fish));
    }

    #[test]
    fn pole_projection() {
        let x = Laurent::from_terms(&[(-2, rational(1)), (0, rational(3)), (1, rational(1))]);
        assert_eq!(x.pole_part(), Laurent::monomial(-2, rational(1)));
    }

    #[test]
    fn counterterms() {
        let t = crate::models::Theory::gw4();
        let (phi, r) = toy_ms_character(&t);
        let g = fixtures::matrix_fish();
        assert!(!phi.on_graph(&g).pole_part().is_zero());
        assert!(renormalized(&phi, &r, &g).pole_part().is_zero());
        assert_eq!(renormalized(&phi, &ZeroOp, &g), phi.on_graph(&g));
        assert_eq!(counterterm(&phi, &ZeroOp, &g), Laurent::zero());
        assert_eq!(Counterterm::new(&phi, &r).on_monomial(&Monomial::one()), Laurent::one());
    }
}
