//! Vertex operators of the level-one representation and their modes.
//!
//! The field `X_i^±(z) = E_-^±(α_i,z) E_+^±(α_i,z) e^{±α_i} z^{±α_i(0)+1} f_i^±`
//! is evaluated sector by sector: on a state in sector `β` the zero-mode
//! factors are concrete integers and monomials, so the mode `x_i^±(k)` is
//! the sum of the `E_-` and `E_+` term pairs whose total `z`-power is `-k`.
//! The scalar factor is `f_i^+(β) = r^{-1/2} ε(α_i,β)` and
//! `f_i^-(β) = s^{-1/2} ε(α_i,β)` with the vertex cocycle
//! [`RootSystem::vertex_cocycle`].
//!
//! `E_-` is stored as creation polynomials in the rescaled oscillators
//! `ā_i(-n)`; `E_+` acts as the substitution `ā_j(-n) ↦ ā_j(-n) + K_{ij}(n) z^{-n}`,
//! since each `a_i(n)` is a derivation with constant values on generators.
//!
//! [`ModeOperator`] composes modes, Heisenberg generators, Cartan fields and
//! scalars into expressions; [`Evaluator`] applies them to Fock states with
//! memoization.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use smallvec::SmallVec;

use crate::fock::{FockSpace, FockState, LinComb, Osc, Truncation};
use crate::roots::{RootSystem, Sign};
use crate::scalars::{qnum_rs, Field, Rat, Scalar};

/// Largest `z`-degree of the precomputed exponential tables.
pub const MAX_SERIES_DEGREE: usize = 20;

/// The three creation exponentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CreationKind {
    /// `E_-^+`: `exp(Σ s^{n/2} ā(-n) z^n)`.
    Plus,
    /// `E_-^-`: `exp(-Σ s^{-n/2} ā(-n) z^n)`.
    Minus,
    /// The exponential of `Φ`: `exp(-(r-s) Σ [n] ā(-n) z^n)`.
    Phi,
}

/// The three annihilation exponentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnnihilationKind {
    /// `E_+^+`: `exp(-Σ r^{-n/2}/[n] a(n) z^{-n})`.
    Plus,
    /// `E_+^-`: `exp(Σ r^{n/2}/[n] a(n) z^{-n})`.
    Minus,
    /// The exponential of `Ψ`: `exp((r-s) Σ a(n) z^{-n})`.
    Psi,
}

impl CreationKind {
    fn index(self) -> usize {
        self as usize
    }
    /// The creation exponential of `X^±`.
    pub fn of_sign(s: Sign) -> Self {
        match s {
            Sign::Plus => CreationKind::Plus,
            Sign::Minus => CreationKind::Minus,
        }
    }
    /// Coefficient of `ā(-n) z^n` in the exponent, as a scalar.
    pub fn linear_coeff(self, n: i32) -> Scalar {
        match self {
            CreationKind::Plus => Scalar::s_half(n),
            CreationKind::Minus => Scalar::s_half(-n).neg(),
            CreationKind::Phi => Scalar::r().pow(n).unwrap().sub(&Scalar::s().pow(n).unwrap()).neg(),
        }
    }
}

impl AnnihilationKind {
    fn index(self) -> usize {
        self as usize
    }
    /// The annihilation exponential of `X^±`.
    pub fn of_sign(s: Sign) -> Self {
        match s {
            Sign::Plus => AnnihilationKind::Plus,
            Sign::Minus => AnnihilationKind::Minus,
        }
    }
    /// Coefficient of `a(n) z^{-n}` in the exponent, as a scalar.
    pub fn linear_coeff(self, n: i32) -> Scalar {
        let qn = qnum_rs(n);
        match self {
            AnnihilationKind::Plus => Scalar::r_half(-n).div(&qn).unwrap().neg(),
            AnnihilationKind::Minus => Scalar::r_half(n).div(&qn).unwrap(),
            AnnihilationKind::Psi => Scalar::r().sub(&Scalar::s()),
        }
    }
}

/// One creation monomial: the multiset of modes (all of the same node) and
/// its coefficient.
pub type CreationTerm<E> = (SmallVec<[u8; 8]>, E);

/// Precomputed exponential tables for one root system and field.
#[derive(Debug)]
pub struct VertexEngine<F: Field> {
    fock: FockSpace<F>,
    /// `creation[kind][p]`: terms of the `z^p` coefficient.
    creation: Vec<Vec<Vec<CreationTerm<F::E>>>>,
    /// `shift[kind][i][j][n]`: `K_{ij}(n)` of the substitution.
    shift: Vec<Vec<Vec<Vec<F::E>>>>,
}

fn exp_expansion(linear: &[Scalar], p: usize) -> Vec<(SmallVec<[u8; 8]>, Scalar)> {
    let mut out = Vec::new();
    for part in crate::fock::partitions(p as u32) {
        let mut coeff = Scalar::one();
        let mut k = 0;
        while k < part.len() {
            let n = part[k];
            let m = part[k..].iter().take_while(|&&x| x == n).count();
            let mut fact = 1i64;
            for t in 1..=m as i64 {
                fact *= t;
            }
            coeff = coeff.mul(&linear[n as usize].pow(m as i32).unwrap()).scale(&Rat::new(1, fact));
            k += m;
        }
        let mut parts: SmallVec<[u8; 8]> = part.iter().map(|&n| n as u8).collect();
        parts.sort_unstable();
        out.push((parts, coeff));
    }
    out
}

impl<F: Field> VertexEngine<F> {
    /// Builds all tables.
    pub fn new(rs: Arc<RootSystem>, field: F) -> Self {
        let fock = FockSpace::new(rs.clone(), field.clone());
        let n = rs.rank();
        let maxn = MAX_SERIES_DEGREE;
        let mut creation = Vec::new();
        for kind in [CreationKind::Plus, CreationKind::Minus, CreationKind::Phi] {
            let linear: Vec<Scalar> =
                (0..=maxn).map(|k| if k == 0 { Scalar::zero() } else { kind.linear_coeff(k as i32) }).collect();
            let table: Vec<Vec<CreationTerm<F::E>>> = (0..=maxn)
                .map(|p| {
                    exp_expansion(&linear, p)
                        .into_iter()
                        .map(|(parts, c)| (parts, field.from_scalar(&c).expect("polynomial")))
                        .collect()
                })
                .collect();
            creation.push(table);
        }
        let mut shift = Vec::new();
        for kind in [AnnihilationKind::Plus, AnnihilationKind::Minus, AnnihilationKind::Psi] {
            let mut t = vec![vec![Vec::new(); n + 1]; n + 1];
            for i in 1..=n {
                for j in 1..=n {
                    t[i][j] = (0..=maxn)
                        .map(|m| {
                            if m == 0 {
                                return field.zero();
                            }
                            let m = m as i32;
                            // a_i(m) ā_j(-m) = [a_i(m), a_j(-m)] / [m].
                            let h = crate::fock::heisenberg_bracket(&rs, i, m, j, -m);
                            let c = kind.linear_coeff(m).mul(&h).div(&qnum_rs(m)).unwrap();
                            field.from_scalar(&c).expect("finite")
                        })
                        .collect();
                }
            }
            shift.push(t);
        }
        VertexEngine { fock, creation, shift }
    }

    /// The underlying Fock space.
    pub fn fock(&self) -> &FockSpace<F> {
        &self.fock
    }

    /// The root system.
    pub fn root_system(&self) -> &RootSystem {
        self.fock.root_system()
    }

    /// The field.
    pub fn field(&self) -> &F {
        self.fock.field()
    }

    /// Terms of the `z^p` coefficient of a creation exponential.
    pub fn creation_terms(&self, kind: CreationKind, p: usize) -> &[CreationTerm<F::E>] {
        assert!(p <= MAX_SERIES_DEGREE, "series degree {p} exceeds {MAX_SERIES_DEGREE}");
        &self.creation[kind.index()][p]
    }

    /// `K_{ij}(n)` of an annihilation exponential.
    pub fn shift_value(&self, kind: AnnihilationKind, i: usize, j: usize, n: usize) -> &F::E {
        &self.shift[kind.index()][i][j][n]
    }

    /// The annihilation exponential of node `i` applied to the oscillator
    /// part of a state: `(remaining oscillators, power p of z^{-1}, coefficient)`.
    pub fn substitution(&self, kind: AnnihilationKind, i: usize, osc: &[Osc]) -> Vec<(SmallVec<[Osc; 6]>, u32, F::E)> {
        let f = self.field();
        let table = &self.shift[kind.index()][i];
        let mut acc: Vec<(SmallVec<[Osc; 6]>, u32, F::E)> = vec![(SmallVec::new(), 0, f.one())];
        let mut k = 0;
        while k < osc.len() {
            let o = osc[k];
            let m = osc[k..].iter().take_while(|&&x| x == o).count();
            let kv = &table[o.0 as usize][o.1 as usize];
            let mut next = Vec::with_capacity(acc.len() * (m + 1));
            // Σ_t C(m,t) K^t ā^{m-t} z^{-n t}
            let mut pw = f.one();
            let mut binom = 1i64;
            for t in 0..=m {
                if t > 0 {
                    if f.is_zero(kv) {
                        break;
                    }
                    pw = f.mul(&pw, kv);
                    binom = binom * (m - t + 1) as i64 / t as i64;
                }
                let c = f.mul(&pw, &f.int(binom));
                for (base, p, bc) in &acc {
                    let mut b = base.clone();
                    for _ in 0..(m - t) {
                        b.push(o);
                    }
                    next.push((b, p + (o.1 as u32) * t as u32, f.mul(bc, &c)));
                }
            }
            acc = next;
            k += m;
        }
        acc
    }

    /// `f_i^±(β)`: the scalar factor of `X_i^±` on sector `β`.
    pub fn zero_mode_factor(&self, i: usize, sign: Sign, beta: &[i32]) -> F::E {
        let c = self.root_system().vertex_cocycle(i, beta);
        let (ra, sa) = match sign {
            Sign::Plus => (-2, 0),
            Sign::Minus => (0, -2),
        };
        self.field().mono(&Rat::int(c.sign as i64), ra + 2 * c.r_halves, sa + 2 * c.s_halves)
    }

    /// `x_i^±(k)` on one basis state.
    pub fn x_mode_on_state(&self, i: usize, sign: Sign, k: i32, s: &FockState) -> LinComb<F::E> {
        let f = self.field();
        let e = sign.as_i32();
        let beta = s.beta();
        let zp = self.fock.z_power(i, s);
        // z-power of a term: p_minus - p_plus + e (α_i,β) + 1 = -k.
        let base = -k - 1 - e * zp;
        let fac = self.zero_mode_factor(i, sign, &beta);
        let target = s.shifted_simple(i, e);
        let ckind = CreationKind::of_sign(sign);
        let mut out = LinComb::zero();
        for (rest, p_plus, c1) in self.substitution(AnnihilationKind::of_sign(sign), i, s.oscillators()) {
            let p_minus = base + p_plus as i32;
            if p_minus < 0 {
                continue;
            }
            let c1 = f.mul(&c1, &fac);
            for (parts, c2) in self.creation_terms(ckind, p_minus as usize) {
                let mut osc = rest.clone();
                osc.extend(parts.iter().map(|&n| (i as u8, n)));
                osc.sort_unstable();
                out.add_term(f, target.with_oscillators(osc), f.mul(&c1, c2));
            }
        }
        out
    }

    /// `ω_i(m)` (coefficient of `z^{-m}` in `Ψ_i(z)`) on one basis state;
    /// zero for `m < 0`.
    pub fn psi_mode_on_state(&self, i: usize, m: i32, s: &FockState) -> LinComb<F::E> {
        let f = self.field();
        let mut out = LinComb::zero();
        if m < 0 {
            return out;
        }
        let w = self.fock.diagonal_value(&crate::fock::Diagonal::Omega(i), s);
        for (rest, p, c) in self.substitution(AnnihilationKind::Psi, i, s.oscillators()) {
            if p as i32 == m {
                let mut osc = rest;
                osc.sort_unstable();
                out.add_term(f, s.with_oscillators(osc), f.mul(&c, &w));
            }
        }
        out
    }

    /// `ω'_i(m)` for `m ≤ 0` (coefficient of `z^{-m}` in `Φ_i(z)`) on one
    /// basis state; zero for `m > 0`.
    pub fn phi_mode_on_state(&self, i: usize, m: i32, s: &FockState) -> LinComb<F::E> {
        let f = self.field();
        let mut out = LinComb::zero();
        if m > 0 {
            return out;
        }
        let w = self.fock.diagonal_value(&crate::fock::Diagonal::OmegaPrime(i), s);
        for (parts, c) in self.creation_terms(CreationKind::Phi, (-m) as usize) {
            let mut st = s.clone();
            for &n in parts {
                st = st.with_osc((i as u8, n));
            }
            out.add_term(f, st, f.mul(c, &w));
        }
        out
    }
}

/// Creation polynomial `z^p`-coefficient of `E_-^±(α_i, z)` in the
/// `a_i(-n)` basis: `(modes, coefficient)` pairs.
pub fn exp_series_minus(sign: Sign, p: usize) -> Vec<(Vec<u32>, Scalar)> {
    let kind = CreationKind::of_sign(sign);
    let linear: Vec<Scalar> =
        (0..=p).map(|k| if k == 0 { Scalar::zero() } else { kind.linear_coeff(k as i32) }).collect();
    exp_expansion(&linear, p)
        .into_iter()
        .map(|(parts, c)| {
            let mut den = Scalar::one();
            for &n in &parts {
                den = den.mul(&qnum_rs(n as i32));
            }
            (parts.iter().map(|&n| n as u32).collect(), c.div(&den).unwrap())
        })
        .collect()
}

/// Annihilator polynomial, `z^{-p}`-coefficient of `E_+^±(α_i, z)` in the
/// `a_i(n)` basis: `(modes, coefficient)` pairs.
pub fn exp_series_plus(sign: Sign, p: usize) -> Vec<(Vec<u32>, Scalar)> {
    let kind = AnnihilationKind::of_sign(sign);
    let linear: Vec<Scalar> =
        (0..=p).map(|k| if k == 0 { Scalar::zero() } else { kind.linear_coeff(k as i32) }).collect();
    exp_expansion(&linear, p).into_iter().map(|(parts, c)| (parts.iter().map(|&n| n as u32).collect(), c)).collect()
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// An operator expression on the Fock module.
#[derive(Debug, Clone)]
pub enum ModeOperator {
    /// `x_i^±(k)`.
    X {
        /// Node `1..=n`.
        node: usize,
        /// `+` or `-`.
        sign: Sign,
        /// Mode `k`.
        mode: i32,
    },
    /// `a_i(l)`, `l ≠ 0`.
    Heis {
        /// Node.
        node: usize,
        /// Mode `l`.
        mode: i32,
    },
    /// `ω_i(m)`; zero for `m < 0`.
    Psi {
        /// Node.
        node: usize,
        /// Mode `m`.
        mode: i32,
    },
    /// `ω'_i(m)`; zero for `m > 0`.
    Phi {
        /// Node.
        node: usize,
        /// Mode `m`.
        mode: i32,
    },
    /// `Π ω_i^{w_i}`.
    OmegaWeight(Vec<i32>),
    /// `Π ω'_i^{w_i}`.
    OmegaPrimeWeight(Vec<i32>),
    /// `D^p`, acting by `r^{-p d}`.
    DegreeR(i32),
    /// `D'^p`, acting by `s^{-p d}`.
    DegreeS(i32),
    /// Multiplication by a scalar.
    Scalar(Scalar),
    /// Composition; the last factor acts first.
    Product(Vec<Op>),
    /// Linear combination.
    Sum(Vec<(Scalar, Op)>),
    /// `[left, right]_q = left·right − q·right·left`.
    Bracket {
        /// Left operand.
        left: Op,
        /// Right operand.
        right: Op,
        /// Parameter.
        q: Scalar,
    },
}

/// Shared handle to an operator expression with a unique identity, used
/// as the memoization key.
#[derive(Debug, Clone)]
pub struct Op(Arc<(u64, ModeOperator)>);

impl Op {
    /// Wraps an expression.
    pub fn new(m: ModeOperator) -> Op {
        Op(Arc::new((NEXT_ID.fetch_add(1, Ordering::Relaxed), m)))
    }

    /// The expression.
    pub fn kind(&self) -> &ModeOperator {
        &self.0 .1
    }

    fn id(&self) -> u64 {
        self.0 .0
    }

    /// `x_i^±(k)`.
    pub fn x(node: usize, sign: Sign, mode: i32) -> Op {
        Op::new(ModeOperator::X { node, sign, mode })
    }

    /// `a_i(l)`.
    pub fn heis(node: usize, mode: i32) -> Op {
        assert!(mode != 0, "a_i(0) is not a generator");
        Op::new(ModeOperator::Heis { node, mode })
    }

    /// `ω_i(m)`.
    pub fn psi(node: usize, mode: i32) -> Op {
        Op::new(ModeOperator::Psi { node, mode })
    }

    /// `ω'_i(m)`.
    pub fn phi(node: usize, mode: i32) -> Op {
        Op::new(ModeOperator::Phi { node, mode })
    }

    /// A scalar multiple of the identity.
    pub fn scalar(c: Scalar) -> Op {
        Op::new(ModeOperator::Scalar(c))
    }

    /// The identity.
    pub fn identity() -> Op {
        Op::scalar(Scalar::one())
    }

    /// Composition `ops[0] ∘ ops[1] ∘ …`.
    pub fn product(ops: Vec<Op>) -> Op {
        Op::new(ModeOperator::Product(ops))
    }

    /// Linear combination.
    pub fn sum(terms: Vec<(Scalar, Op)>) -> Op {
        Op::new(ModeOperator::Sum(terms))
    }

    /// `a − b`.
    pub fn difference(a: Op, b: Op) -> Op {
        Op::sum(vec![(Scalar::one(), a), (Scalar::int(-1), b)])
    }

    /// `[a, b]_q`.
    pub fn bracket(left: Op, right: Op, q: Scalar) -> Op {
        Op::new(ModeOperator::Bracket { left, right, q })
    }

    /// `c · a`.
    pub fn scaled(c: Scalar, a: Op) -> Op {
        Op::sum(vec![(c, a)])
    }

    /// Lattice and degree shift `(Δβ, Δd)` when the operator is homogeneous.
    pub fn shift(&self, rank: usize) -> Option<(Vec<i32>, i32)> {
        let zero = || Some((vec![0; rank], 0));
        match self.kind() {
            ModeOperator::X { node, sign, mode } => {
                let mut b = vec![0; rank];
                b[node - 1] = sign.as_i32();
                Some((b, -mode))
            }
            ModeOperator::Heis { mode, .. } | ModeOperator::Psi { mode, .. } | ModeOperator::Phi { mode, .. } => {
                Some((vec![0; rank], -mode))
            }
            ModeOperator::OmegaWeight(_)
            | ModeOperator::OmegaPrimeWeight(_)
            | ModeOperator::DegreeR(_)
            | ModeOperator::DegreeS(_)
            | ModeOperator::Scalar(_) => zero(),
            ModeOperator::Product(ops) => {
                let mut b = vec![0; rank];
                let mut d = 0;
                for o in ops {
                    let (ob, od) = o.shift(rank)?;
                    for (x, y) in b.iter_mut().zip(ob) {
                        *x += y;
                    }
                    d += od;
                }
                Some((b, d))
            }
            ModeOperator::Sum(terms) => {
                let mut it = terms.iter().map(|(_, o)| o.shift(rank));
                let first = it.next().unwrap_or_else(zero)?;
                for s in it {
                    if s? != first {
                        return None;
                    }
                }
                Some(first)
            }
            ModeOperator::Bracket { left, right, .. } => {
                let (mut b, d) = left.shift(rank)?;
                let (rb, rd) = right.shift(rank)?;
                for (x, y) in b.iter_mut().zip(rb) {
                    *x += y;
                }
                Some((b, d + rd))
            }
        }
    }

    /// Text form for reports.
    pub fn describe(&self) -> String {
        match self.kind() {
            ModeOperator::X { node, sign, mode } => format!("x_{node}^{}({mode})", sign.symbol()),
            ModeOperator::Heis { node, mode } => format!("a_{node}({mode})"),
            ModeOperator::Psi { node, mode } => format!("ω_{node}({mode})"),
            ModeOperator::Phi { node, mode } => format!("ω'_{node}({mode})"),
            ModeOperator::OmegaWeight(w) => format!("ω^{w:?}"),
            ModeOperator::OmegaPrimeWeight(w) => format!("ω'^{w:?}"),
            ModeOperator::DegreeR(p) => format!("D^{p}"),
            ModeOperator::DegreeS(p) => format!("D'^{p}"),
            ModeOperator::Scalar(c) => format!("({})", c.render()),
            ModeOperator::Product(ops) => ops.iter().map(Op::describe).collect::<Vec<_>>().join(" "),
            ModeOperator::Sum(t) => {
                t.iter().map(|(c, o)| format!("({})·[{}]", c.render(), o.describe())).collect::<Vec<_>>().join(" + ")
            }
            ModeOperator::Bracket { left, right, q } => {
                format!("[{}, {}]_({})", left.describe(), right.describe(), q.render())
            }
        }
    }
}

/// Memoizing evaluator of [`Op`] expressions on Fock states.
#[derive(Debug)]
pub struct Evaluator<F: Field> {
    engine: Arc<VertexEngine<F>>,
    cache: HashMap<(u64, FockState), Arc<LinComb<F::E>>>,
    leaf_cache: HashMap<(LeafKey, FockState), Arc<LinComb<F::E>>>,
    limit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum LeafKey {
    X(usize, i8, i32),
    Heis(usize, i32),
    Psi(usize, i32),
    Phi(usize, i32),
}

impl<F: Field> Evaluator<F> {
    /// An evaluator with the default cache bound.
    pub fn new(engine: Arc<VertexEngine<F>>) -> Self {
        Evaluator { engine, cache: HashMap::new(), leaf_cache: HashMap::new(), limit: 1 << 20 }
    }

    /// The engine.
    pub fn engine(&self) -> &Arc<VertexEngine<F>> {
        &self.engine
    }

    /// The field.
    pub fn field(&self) -> &F {
        self.engine.field()
    }

    /// Drops all memoized results.
    pub fn clear(&mut self) {
        self.cache.clear();
        self.leaf_cache.clear();
    }

    fn leaf(&mut self, key: LeafKey, s: &FockState) -> Arc<LinComb<F::E>> {
        if let Some(v) = self.leaf_cache.get(&(key.clone(), s.clone())) {
            return v.clone();
        }
        let e = &self.engine;
        let f = e.field();
        let out = match key {
            LeafKey::X(i, sg, k) => e.x_mode_on_state(i, if sg > 0 { Sign::Plus } else { Sign::Minus }, k, s),
            LeafKey::Heis(i, l) => {
                let v = LinComb::single(f, s.clone(), f.one());
                e.fock().act_heisenberg(i, l, &v).expect("mode within tables")
            }
            LeafKey::Psi(i, m) => e.psi_mode_on_state(i, m, s),
            LeafKey::Phi(i, m) => e.phi_mode_on_state(i, m, s),
        };
        let out = Arc::new(out);
        if self.leaf_cache.len() >= self.limit {
            self.leaf_cache.clear();
        }
        self.leaf_cache.insert((key, s.clone()), out.clone());
        out
    }

    fn diag(&self, op: &ModeOperator, s: &FockState) -> F::E {
        let e = &self.engine;
        let f = e.field();
        let rs = e.root_system();
        let beta = s.beta();
        match op {
            ModeOperator::OmegaWeight(w) => {
                let (mut a, mut b) = (0, 0);
                for (i, &wi) in w.iter().enumerate() {
                    let (x, y) = rs.pairing_lattice_exp(&beta, i + 1);
                    a += wi * x;
                    b += wi * y;
                }
                f.mono(&Rat::ONE, 4 * a, 4 * b)
            }
            ModeOperator::OmegaPrimeWeight(w) => {
                let (mut a, mut b) = (0, 0);
                for (i, &wi) in w.iter().enumerate() {
                    let (x, y) = rs.pairing_lattice_rev_exp(i + 1, &beta);
                    a -= wi * x;
                    b -= wi * y;
                }
                f.mono(&Rat::ONE, 4 * a, 4 * b)
            }
            ModeOperator::DegreeR(p) => f.mono(&Rat::ONE, -4 * p * s.degree(rs), 0),
            ModeOperator::DegreeS(p) => f.mono(&Rat::ONE, 0, -4 * p * s.degree(rs)),
            _ => unreachable!("not diagonal"),
        }
    }

    /// Applies an operator to a basis state.
    pub fn apply_state(&mut self, op: &Op, s: &FockState) -> Arc<LinComb<F::E>> {
        let key = match op.kind() {
            ModeOperator::X { node, sign, mode } => Some(LeafKey::X(*node, sign.as_i32() as i8, *mode)),
            ModeOperator::Heis { node, mode } => Some(LeafKey::Heis(*node, *mode)),
            ModeOperator::Psi { node, mode } => Some(LeafKey::Psi(*node, *mode)),
            ModeOperator::Phi { node, mode } => Some(LeafKey::Phi(*node, *mode)),
            _ => None,
        };
        if let Some(k) = key {
            return self.leaf(k, s);
        }
        let f = self.engine.field().clone();
        match op.kind() {
            ModeOperator::OmegaWeight(_)
            | ModeOperator::OmegaPrimeWeight(_)
            | ModeOperator::DegreeR(_)
            | ModeOperator::DegreeS(_) => {
                let c = self.diag(op.kind(), s);
                return Arc::new(LinComb::single(&f, s.clone(), c));
            }
            ModeOperator::Scalar(c) => {
                let c = f.from_scalar(c).expect("finite scalar");
                return Arc::new(LinComb::single(&f, s.clone(), c));
            }
            _ => {}
        }
        if let Some(v) = self.cache.get(&(op.id(), s.clone())) {
            return v.clone();
        }
        let out = match op.kind() {
            ModeOperator::Product(ops) => {
                let mut v = LinComb::single(&f, s.clone(), f.one());
                for o in ops.iter().rev() {
                    v = self.apply(o, &v);
                    if v.is_zero() {
                        break;
                    }
                }
                v
            }
            ModeOperator::Sum(terms) => {
                let mut acc = LinComb::zero();
                for (c, o) in terms {
                    let c = f.from_scalar(c).expect("finite scalar");
                    let v = self.apply_state(o, s);
                    acc.add_scaled(&f, &v, &c);
                }
                acc
            }
            ModeOperator::Bracket { left, right, q } => {
                let rv = self.apply_state(right, s);
                let lrv = self.apply(left, &rv);
                let lv = self.apply_state(left, s);
                let rlv = self.apply(right, &lv);
                let q = f.from_scalar(q).expect("finite scalar");
                let mut acc = lrv;
                acc.add_scaled(&f, &rlv, &f.neg(&q));
                acc
            }
            _ => unreachable!(),
        };
        let out = Arc::new(out);
        if self.cache.len() >= self.limit {
            self.cache.clear();
        }
        self.cache.insert((op.id(), s.clone()), out.clone());
        out
    }

    /// Applies an operator to a linear combination.
    pub fn apply(&mut self, op: &Op, v: &LinComb<F::E>) -> LinComb<F::E> {
        let f = self.engine.field().clone();
        let mut acc = LinComb::zero();
        for (s, c) in v.iter() {
            let w = self.apply_state(op, s);
            acc.add_scaled(&f, &w, c);
        }
        acc
    }
}

/// Input states of the window on which an operator of shift `(Δβ, Δd)`
/// produces an image that is inside the window and not zero for degree
/// reasons.
pub fn admissible_states<'a>(
    rs: &RootSystem,
    states: &'a [FockState],
    shift: &(Vec<i32>, i32),
    trunc: &Truncation,
) -> Vec<&'a FockState> {
    states
        .iter()
        .filter(|s| {
            let b: Vec<i32> = s.beta().iter().zip(&shift.0).map(|(x, y)| x + y).collect();
            if b.iter().any(|x| x.unsigned_abs() > trunc.beta_box) {
                return false;
            }
            let d = s.degree(rs) + shift.1;
            d <= trunc.max_osc_degree as i32 && d >= rs.bilinear_form(&b, &b) / 2
        })
        .collect()
}

/// The mode operator `x_i^±(k)`.
pub fn x_mode(i: usize, sign: Sign, k: i32) -> Op {
    Op::x(i, sign, k)
}

/// Which Cartan field to take a mode of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CartanField {
    /// `Φ_i(z) = Σ ω'_i(-m) z^m`.
    Phi,
    /// `Ψ_i(z) = Σ ω_i(m) z^{-m}`.
    Psi,
}

/// `ω_i(m)` (for `Psi`) or `ω'_i(-m)` (for `Phi`), `m ≥ 0`.
pub fn phi_psi_mode(i: usize, which: CartanField, m: u32) -> Op {
    match which {
        CartanField::Psi => Op::psi(i, m as i32),
        CartanField::Phi => Op::phi(i, -(m as i32)),
    }
}

/// A closed-form contraction factor
/// `Π (1 − c_k x)^{e_k} · x^{h/2} · ε(α_i,α_j)^p` with `x = w/z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    /// `(c_k, e_k)`.
    pub factors: Vec<(Scalar, i32)>,
    /// Exponent of `x = w/z`, in half units.
    pub x_power_halves: i32,
    /// Exponent of the cocycle value `ε(α_i, α_j)`.
    pub cocycle_power: i32,
}

fn series_one_minus(c: &Scalar, e: i32, order: usize) -> Vec<Scalar> {
    // (1 - c x)^e as a power series.
    let mut out = vec![Scalar::zero(); order + 1];
    if e >= 0 {
        let mut binom = 1i64;
        for k in 0..=(e as usize).min(order) {
            if k > 0 {
                binom = binom * (e as i64 - k as i64 + 1) / k as i64;
            }
            out[k] = c.pow(k as i32).unwrap().scale(&Rat::int(binom)).scale(&Rat::int(if k % 2 == 0 { 1 } else { -1 }));
        }
    } else {
        // (1 - c x)^{-m} = Σ C(m+k-1, k) c^k x^k
        let m = (-e) as i64;
        let mut binom = 1i64;
        for (k, slot) in out.iter_mut().enumerate() {
            if k > 0 {
                binom = binom * (m + k as i64 - 1) / k as i64;
            }
            *slot = c.pow(k as i32).unwrap().scale(&Rat::int(binom));
        }
    }
    out
}

fn series_mul(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().min(b.len());
    (0..n).map(|k| (0..=k).fold(Scalar::zero(), |acc, t| acc.add(&a[t].mul(&b[k - t])))).collect()
}

impl Contraction {
    /// Power series of the `Π (1 − c_k x)^{e_k}` part to the given order.
    pub fn series(&self, order: usize) -> Vec<Scalar> {
        let mut acc = vec![Scalar::zero(); order + 1];
        acc[0] = Scalar::one();
        for (c, e) in &self.factors {
            acc = series_mul(&acc, &series_one_minus(c, *e, order));
        }
        acc
    }
}

/// The closed-form contraction factor of `X_i^{σ}(z) X_j^{σ'}(w)` in closed form.
pub fn contraction_factor(rs: &RootSystem, i: usize, j: usize, signs: (Sign, Sign)) -> Contraction {
    let a = rs.cartan(i, j);
    let (s1, s2) = (signs.0.as_i32(), signs.1.as_i32());
    if a == 0 {
        return Contraction { factors: vec![], x_power_halves: 0, cocycle_power: s2 };
    }
    // (r^{-1}s)^{σ/2} and (rs)^{-σ/2} in quarter units.
    let ratio_half = |e: i32| Scalar::mono(Rat::ONE, -2 * e, 2 * e);
    let rs_half = |e: i32| Scalar::rs_half(e);
    if s1 == s2 {
        if i != j {
            Contraction { factors: vec![(ratio_half(s1), -1)], x_power_halves: 1, cocycle_power: s1 }
        } else {
            let base = ratio_half(s1).mul(&rs_half(1));
            Contraction {
                factors: vec![(base.mul(&Scalar::r().inv().unwrap()), 1), (base.mul(&Scalar::s().inv().unwrap()), 1)],
                x_power_halves: -2,
                cocycle_power: s1,
            }
        }
    } else if i != j {
        Contraction { factors: vec![(rs_half(-s1), 1)], x_power_halves: -1, cocycle_power: -s1 }
    } else {
        let base = rs_half(1).mul(&rs_half(-s1));
        Contraction {
            factors: vec![(base.mul(&Scalar::r().inv().unwrap()), -1), (base.mul(&Scalar::s().inv().unwrap()), -1)],
            x_power_halves: 2,
            cocycle_power: -s1,
        }
    }
}

/// The Heisenberg contraction `E_+^σ(α_i,z) E_-^{σ'}(α_j,w) = E_-E_+ · C(w/z)`
/// computed from the commutators of the exponents: `C = exp(Σ_n c_n L_n [a_i(n), a_j(-n)] x^n)`.
pub fn heisenberg_contraction_series(
    rs: &RootSystem,
    i: usize,
    j: usize,
    signs: (Sign, Sign),
    order: usize,
) -> Vec<Scalar> {
    let ak = AnnihilationKind::of_sign(signs.0);
    let ck = CreationKind::of_sign(signs.1);
    // Exponent series g(x) = Σ g_n x^n.
    let mut g = vec![Scalar::zero(); order + 1];
    for (n, slot) in g.iter_mut().enumerate().skip(1) {
        let n = n as i32;
        // L_n in the a-basis is (ā-coefficient)/[n].
        let l = ck.linear_coeff(n).div(&qnum_rs(n)).unwrap();
        *slot = ak.linear_coeff(n).mul(&l).mul(&crate::fock::heisenberg_bracket(rs, i, n, j, -n));
    }
    // exp of a series with zero constant term: E' = g' E.
    let mut e = vec![Scalar::zero(); order + 1];
    e[0] = Scalar::one();
    for k in 1..=order {
        let mut acc = Scalar::zero();
        for t in 1..=k {
            acc = acc.add(&g[t].scale(&Rat::int(t as i64)).mul(&e[k - t]));
        }
        e[k] = acc.scale(&Rat::new(1, k as i64));
    }
    e
}

/// Coefficients of the normal-ordered product `:X_i^σ(z) X_j^{σ'}(w):` on a
/// state, without the symmetric zero-mode factor `(zw)^{σσ'(α_i,α_j)/2}`:
/// a map from `(z-exponent, w-exponent)` to vectors, for exponents up to
/// the given bounds.
pub fn normal_ordered_pair<F: Field>(
    engine: &VertexEngine<F>,
    (i, si): (usize, Sign),
    (j, sj): (usize, Sign),
    s: &FockState,
    zmax: i32,
    wmax: i32,
) -> std::collections::BTreeMap<(i32, i32), LinComb<F::E>> {
    let f = engine.field();
    let beta = s.beta();
    let (ei, ej) = (si.as_i32(), sj.as_i32());
    let zi = ei * engine.fock().z_power(i, s) + 1;
    let wj = ej * engine.fock().z_power(j, s) + 1;
    let fac = f.mul(&engine.zero_mode_factor(i, si, &beta), &engine.zero_mode_factor(j, sj, &beta));
    let target = s.shifted_simple(i, ei).shifted_simple(j, ej);
    let mut out: std::collections::BTreeMap<(i32, i32), LinComb<F::E>> = std::collections::BTreeMap::new();
    // E_+(α_i,z) E_+(α_j,w): two successive substitutions.
    for (rest1, q1, c1) in engine.substitution(AnnihilationKind::of_sign(sj), j, s.oscillators()) {
        let mut rest1 = rest1;
        rest1.sort_unstable();
        for (rest2, q2, c2) in engine.substitution(AnnihilationKind::of_sign(si), i, &rest1) {
            let c12 = f.mul(&f.mul(&c1, &c2), &fac);
            for p1 in 0..=(zmax - zi + q2 as i32).max(-1) {
                for p2 in 0..=(wmax - wj + q1 as i32).max(-1) {
                    let za = p1 - q2 as i32 + zi;
                    let wb = p2 - q1 as i32 + wj;
                    let entry = out.entry((za, wb)).or_default();
                    for (parts1, d1) in engine.creation_terms(CreationKind::of_sign(si), p1 as usize) {
                        for (parts2, d2) in engine.creation_terms(CreationKind::of_sign(sj), p2 as usize) {
                            let mut osc = rest2.clone();
                            osc.extend(parts1.iter().map(|&n| (i as u8, n)));
                            osc.extend(parts2.iter().map(|&n| (j as u8, n)));
                            osc.sort_unstable();
                            entry.add_term(f, target.with_oscillators(osc), f.mul(&c12, &f.mul(d1, d2)));
                        }
                    }
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::ExactField;

    fn sc(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    fn engine(name: &str) -> Arc<VertexEngine<ExactField>> {
        Arc::new(VertexEngine::new(Arc::new(RootSystem::from_name(name).unwrap()), ExactField))
    }

    #[test]
    fn exponential_series_examples() {
        assert_eq!(exp_series_minus(Sign::Plus, 0), vec![(vec![], Scalar::one())]);
        assert_eq!(exp_series_minus(Sign::Plus, 1), vec![(vec![1], sc("s^(1/2)"))]);
        let two = exp_series_minus(Sign::Plus, 2);
        assert!(two.contains(&(vec![2], sc("s").div(&qnum_rs(2)).unwrap())));
        assert!(two.contains(&(vec![1, 1], sc("s/2"))));
        assert_eq!(exp_series_plus(Sign::Plus, 1), vec![(vec![1], sc("-r^(-1/2)"))]);
        // τ maps the E_+^+ coefficients to the E_-^- ones.
        for p in 1..=4 {
            let a = exp_series_plus(Sign::Plus, p);
            let b = exp_series_minus(Sign::Minus, p);
            for ((pa, ca), (pb, cb)) in a.iter().zip(&b) {
                assert_eq!(pa, pb);
                assert_eq!(&ca.tau(), cb);
            }
        }
    }

    #[test]
    fn x_mode_examples_on_vacuum() {
        let e = engine("A2");
        let mut ev = Evaluator::new(e.clone());
        let vac = FockState::vacuum(2);
        for k in 0..4 {
            assert!(ev.apply_state(&x_mode(1, Sign::Plus, k), &vac).is_zero());
        }
        let v = ev.apply_state(&x_mode(1, Sign::Plus, -1), &vac);
        let want = LinComb::single(&ExactField, FockState::new(&[], &[1, 0]), sc("r^(-1/2)"));
        assert_eq!(*v, want);
        let v = ev.apply_state(&x_mode(1, Sign::Plus, -2), &vac);
        // r^{-1/2} s^{1/2} a_1(-1) ⊗ e^{α_1}; [1] = 1 so ā = a.
        let want = LinComb::single(&ExactField, FockState::new(&[(1, 1)], &[1, 0]), sc("r^(-1/2)*s^(1/2)"));
        assert_eq!(*v, want);
    }

    #[test]
    fn cartan_field_modes() {
        let e = engine("A2");
        let mut ev = Evaluator::new(e.clone());
        let f = ExactField;
        let s = FockState::new(&[(1, 1)], &[1, 0]);
        let v = LinComb::single(&f, s.clone(), Scalar::one());
        let w0 = ev.apply(&phi_psi_mode(1, CartanField::Psi, 0), &v);
        assert_eq!(w0, v.scale(&f, &sc("r*s^-1")));
        // ω_1(1) = ω_1 (r - s) a_1(1)
        let w1 = ev.apply(&phi_psi_mode(1, CartanField::Psi, 1), &v);
        let direct = ev.apply(
            &Op::product(vec![Op::new(ModeOperator::OmegaWeight(vec![1, 0])), Op::scalar(sc("r-s")), Op::heis(1, 1)]),
            &v,
        );
        assert_eq!(w1, direct);
        // ω'_1(-1) = ω'_1 (-(r - s)) a_1(-1)
        let p1 = ev.apply(&phi_psi_mode(1, CartanField::Phi, 1), &v);
        let direct = ev.apply(
            &Op::product(vec![
                Op::new(ModeOperator::OmegaPrimeWeight(vec![1, 0])),
                Op::scalar(sc("s-r")),
                Op::heis(1, -1),
            ]),
            &v,
        );
        assert_eq!(p1, direct);
        assert!(ev.apply(&Op::psi(1, -1), &v).is_zero());
        assert!(ev.apply(&Op::phi(1, 1), &v).is_zero());
    }

    #[test]
    fn degree_law_and_finite_support() {
        let e = engine("A2");
        let rs = e.root_system().clone();
        let mut ev = Evaluator::new(e.clone());
        let t = Truncation { max_osc_degree: 3, beta_box: 1 };
        for s in t.enumerate(&rs).iter().take(40) {
            let d = s.degree(&rs);
            for sign in Sign::both() {
                for k in -2..=2 {
                    let v = ev.apply_state(&x_mode(2, sign, k), s);
                    for (o, _) in v.iter() {
                        assert_eq!(o.degree(&rs), d - k);
                    }
                }
                // An image of degree d - k below its sector norm vanishes.
                let bound = d + 2;
                assert!(ev.apply_state(&x_mode(1, sign, bound), s).is_zero());
            }
        }
    }

    #[test]
    fn contraction_closed_forms_match_commutators() {
        for name in ["A2", "D4"] {
            let rs = RootSystem::from_name(name).unwrap();
            for i in 1..=rs.rank() {
                for j in 1..=rs.rank() {
                    for s1 in Sign::both() {
                        for s2 in Sign::both() {
                            let c = contraction_factor(&rs, i, j, (s1, s2));
                            let h = heisenberg_contraction_series(&rs, i, j, (s1, s2), 4);
                            assert_eq!(c.series(4), h, "{name} {i} {j} {s1:?} {s2:?}");
                            assert_eq!(c.x_power_halves, -s1.as_i32() * s2.as_i32() * rs.cartan(i, j));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn op_shift_and_admissibility() {
        let rs = RootSystem::from_name("A2").unwrap();
        let o = Op::bracket(x_mode(1, Sign::Minus, 0), x_mode(2, Sign::Minus, 1), Scalar::s());
        assert_eq!(o.shift(2), Some((vec![-1, -1], -1)));
        let t = Truncation::default();
        let states = t.enumerate(&rs);
        let adm = admissible_states(&rs, &states, &o.shift(2).unwrap(), &t);
        assert!(!adm.is_empty() && adm.len() < states.len());
        let bad = Op::sum(vec![(Scalar::one(), x_mode(1, Sign::Plus, 0)), (Scalar::one(), x_mode(2, Sign::Plus, 0))]);
        assert_eq!(bad.shift(2), None);
        assert!(o.describe().contains("x_1^-(0)"));
    }
}
