//! Quantum Lie bracket calculus.
//!
//! [`BracketExpr`] is an expression tree of nested brackets
//! `[a, b]_q = ab − q·ba` over generator leaves. It can be expanded into the
//! free associative algebra ([`expand_bracket`]), transformed by the
//! anti-involution `τ` ([`BracketExpr::tau`]), serialized as JSON, and turned
//! into an [`Op`] acting on the level-one Fock module ([`to_operator`]).
//!
//! The module also builds quantum root vectors along a word of simple roots
//! ([`root_vector`]), the images of the Chevalley generators under the
//! Drinfeld isomorphism ([`ChevalleyImages`]), and the catalog of bracket
//! identities that must vanish (or agree) in the representation
//! ([`lemma_catalog`]).

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::fock::FockState;
use crate::relations::{Checker, InstanceReport};
use crate::roots::{Family, RootSystem, Sign};
use crate::scalars::{qbinomial, qnumber, Field, ParseScalarError, Rat, Scalar};
use crate::vertex::{ModeOperator, Op};

/// Errors of the bracket module.
#[derive(Debug, thiserror::Error)]
pub enum BracketError {
    /// The JSON text does not match the expression schema.
    #[error("bracket expression does not parse at line {line}, column {column}: {message}")]
    Parse {
        /// 1-based line.
        line: usize,
        /// 1-based column.
        column: usize,
        /// Parser message.
        message: String,
    },
    /// A parameter string is not a scalar.
    #[error("bad scalar {text:?}: {source}")]
    Scalar {
        /// Offending text.
        text: String,
        /// Parser error.
        source: ParseScalarError,
    },
    /// A sign token other than `+` or `-`.
    #[error("bad sign {0:?}, expected \"+\" or \"-\"")]
    Sign(String),
    /// A nest whose parameter list does not have one entry fewer than its items.
    #[error("nest of {items} items needs {} parameters, got {params}", items.saturating_sub(1))]
    NestArity {
        /// Number of items.
        items: usize,
        /// Number of parameters.
        params: usize,
    },
    /// A leaf with no operator on the Fock module.
    #[error("leaf {0} has no Fock-space operator")]
    NotRepresentable(String),
    /// A node index outside `1..=n`.
    #[error("node {node} outside 1..={rank}")]
    Node {
        /// Offending node.
        node: usize,
        /// Rank.
        rank: usize,
    },
}

/// A generator leaf.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// `x_i^±(k)`.
    X {
        /// Node `1..=n`.
        node: usize,
        /// `+` or `-`.
        sign: Sign,
        /// Mode.
        mode: i32,
    },
    /// `ω_i^p`.
    Omega {
        /// Node.
        node: usize,
        /// Power.
        power: i32,
    },
    /// `ω'_i^p`.
    OmegaPrime {
        /// Node.
        node: usize,
        /// Power.
        power: i32,
    },
    /// `γ^p`, acting as `r^p` at level one.
    Gamma(i32),
    /// `γ'^p`, acting as `s^p` at level one.
    GammaPrime(i32),
    /// A formal letter of the free algebra.
    Symbol(String),
}

impl Generator {
    /// Image under `τ`.
    pub fn tau(&self) -> Generator {
        match self {
            Generator::X { node, sign, mode } => Generator::X { node: *node, sign: sign.flip(), mode: -mode },
            Generator::Omega { node, power } => Generator::OmegaPrime { node: *node, power: *power },
            Generator::OmegaPrime { node, power } => Generator::Omega { node: *node, power: *power },
            Generator::Gamma(p) => Generator::GammaPrime(*p),
            Generator::GammaPrime(p) => Generator::Gamma(*p),
            Generator::Symbol(s) => Generator::Symbol(s.clone()),
        }
    }

    /// Text form, e.g. `x_1^-(1)`.
    pub fn render(&self) -> String {
        match self {
            Generator::X { node, sign, mode } => format!("x_{node}^{}({mode})", sign.symbol()),
            Generator::Omega { node, power } => format!("ω_{node}^{power}"),
            Generator::OmegaPrime { node, power } => format!("ω'_{node}^{power}"),
            Generator::Gamma(p) => format!("γ^{p}"),
            Generator::GammaPrime(p) => format!("γ'^{p}"),
            Generator::Symbol(s) => s.clone(),
        }
    }
}

/// An expression of nested quantum brackets.
#[derive(Debug, Clone, PartialEq)]
pub enum BracketExpr {
    /// A generator.
    Leaf(Generator),
    /// A scalar multiple of the identity.
    Scalar(Scalar),
    /// `[left, right]_q`.
    Bracket {
        /// Left operand.
        left: Box<BracketExpr>,
        /// Right operand.
        right: Box<BracketExpr>,
        /// Parameter.
        q: Scalar,
    },
    /// Ordered product.
    Product(Vec<BracketExpr>),
    /// Linear combination.
    Sum(Vec<(Scalar, BracketExpr)>),
    /// `[a_1, …, a_s]_{(q_1,…,q_{s−1})} = [a_1, [a_2, …, a_s]_{(q_2,…)}]_{q_1}`:
    /// the first item is applied last, from the left.
    LeftNest(Vec<BracketExpr>, Vec<Scalar>),
    /// `⟨a_1, …, a_s⟩_{(q_1,…,q_{s−1})} = [⟨a_1, …, a_{s−1}⟩_{(q_1,…)}, a_s]_{q_{s−1}}`:
    /// the last item is applied last, from the right.
    RightNest(Vec<BracketExpr>, Vec<Scalar>),
}

impl BracketExpr {
    /// `x_i^±(k)`.
    pub fn x(node: usize, sign: Sign, mode: i32) -> Self {
        BracketExpr::Leaf(Generator::X { node, sign, mode })
    }

    /// `x_i^-(k)`.
    pub fn xm(node: usize, mode: i32) -> Self {
        Self::x(node, Sign::Minus, mode)
    }

    /// `x_i^+(k)`.
    pub fn xp(node: usize, mode: i32) -> Self {
        Self::x(node, Sign::Plus, mode)
    }

    /// A formal letter.
    pub fn symbol(name: &str) -> Self {
        BracketExpr::Leaf(Generator::Symbol(name.to_string()))
    }

    /// A scalar.
    pub fn scalar(c: Scalar) -> Self {
        BracketExpr::Scalar(c)
    }

    /// `γ^p`.
    pub fn gamma(p: i32) -> Self {
        BracketExpr::Leaf(Generator::Gamma(p))
    }

    /// `γ'^p`.
    pub fn gamma_prime(p: i32) -> Self {
        BracketExpr::Leaf(Generator::GammaPrime(p))
    }

    /// `Π ω_i^{w_i}` over a lattice point (empty product for `w = 0`).
    pub fn omega_weight(w: &[i32]) -> Self {
        BracketExpr::Product(
            w.iter()
                .enumerate()
                .filter(|(_, &p)| p != 0)
                .map(|(i, &p)| BracketExpr::Leaf(Generator::Omega { node: i + 1, power: p }))
                .collect(),
        )
    }

    /// `Π ω'_i^{w_i}`.
    pub fn omega_prime_weight(w: &[i32]) -> Self {
        BracketExpr::Product(
            w.iter()
                .enumerate()
                .filter(|(_, &p)| p != 0)
                .map(|(i, &p)| BracketExpr::Leaf(Generator::OmegaPrime { node: i + 1, power: p }))
                .collect(),
        )
    }

    /// `[left, right]_q`.
    pub fn bracket(left: BracketExpr, right: BracketExpr, q: Scalar) -> Self {
        BracketExpr::Bracket { left: Box::new(left), right: Box::new(right), q }
    }

    /// `[left, right]_1`.
    pub fn commutator(left: BracketExpr, right: BracketExpr) -> Self {
        Self::bracket(left, right, Scalar::one())
    }

    /// Ordered product.
    pub fn product(items: Vec<BracketExpr>) -> Self {
        BracketExpr::Product(items)
    }

    /// Linear combination.
    pub fn sum(terms: Vec<(Scalar, BracketExpr)>) -> Self {
        BracketExpr::Sum(terms)
    }

    /// `a − b`.
    pub fn difference(a: BracketExpr, b: BracketExpr) -> Self {
        BracketExpr::Sum(vec![(Scalar::one(), a), (Scalar::int(-1), b)])
    }

    /// `c · a`.
    pub fn scaled(c: Scalar, a: BracketExpr) -> Self {
        BracketExpr::Sum(vec![(c, a)])
    }

    /// `[a_1, …, a_s]_{(q)}`, first item outermost.
    pub fn left_nest(items: Vec<BracketExpr>, q: Vec<Scalar>) -> Self {
        BracketExpr::LeftNest(items, q)
    }

    /// `⟨a_1, …, a_s⟩_{(q)}`, last item outermost.
    pub fn right_nest(items: Vec<BracketExpr>, q: Vec<Scalar>) -> Self {
        BracketExpr::RightNest(items, q)
    }

    /// Rewrites nests as explicit binary brackets.
    pub fn unnest(&self) -> Result<BracketExpr, BracketError> {
        Ok(match self {
            BracketExpr::Leaf(_) | BracketExpr::Scalar(_) => self.clone(),
            BracketExpr::Bracket { left, right, q } => Self::bracket(left.unnest()?, right.unnest()?, q.clone()),
            BracketExpr::Product(v) => BracketExpr::Product(v.iter().map(|e| e.unnest()).collect::<Result<_, _>>()?),
            BracketExpr::Sum(v) => {
                BracketExpr::Sum(v.iter().map(|(c, e)| Ok((c.clone(), e.unnest()?))).collect::<Result<_, _>>()?)
            }
            BracketExpr::LeftNest(items, q) => {
                check_arity(items, q)?;
                let mut it = items.iter().rev();
                let mut acc = it.next().expect("nonempty").unnest()?;
                for (a, qq) in it.zip(q.iter().rev()) {
                    acc = Self::bracket(a.unnest()?, acc, qq.clone());
                }
                acc
            }
            BracketExpr::RightNest(items, q) => {
                check_arity(items, q)?;
                let mut it = items.iter();
                let mut acc = it.next().expect("nonempty").unnest()?;
                for (a, qq) in it.zip(q.iter()) {
                    acc = Self::bracket(acc, a.unnest()?, qq.clone());
                }
                acc
            }
        })
    }

    /// Image under the anti-involution `τ`: leaves map by
    /// [`Generator::tau`], scalars by `r ↔ s`, products reverse and
    /// `τ[a, b]_q = [τb, τa]_{τq}`.
    pub fn tau(&self) -> BracketExpr {
        match self {
            BracketExpr::Leaf(g) => BracketExpr::Leaf(g.tau()),
            BracketExpr::Scalar(c) => BracketExpr::Scalar(c.tau()),
            BracketExpr::Bracket { left, right, q } => Self::bracket(right.tau(), left.tau(), q.tau()),
            BracketExpr::Product(v) => BracketExpr::Product(v.iter().rev().map(|e| e.tau()).collect()),
            BracketExpr::Sum(v) => BracketExpr::Sum(v.iter().map(|(c, e)| (c.tau(), e.tau())).collect()),
            BracketExpr::LeftNest(items, q) => BracketExpr::RightNest(
                items.iter().rev().map(|e| e.tau()).collect(),
                q.iter().rev().map(|c| c.tau()).collect(),
            ),
            BracketExpr::RightNest(items, q) => BracketExpr::LeftNest(
                items.iter().rev().map(|e| e.tau()).collect(),
                q.iter().rev().map(|c| c.tau()).collect(),
            ),
        }
    }

    /// Total lattice weight of the `x` leaves of a homogeneous expression,
    /// read from its first monomial.
    pub fn weight(&self, rank: usize) -> Vec<i32> {
        let mut w = vec![0; rank];
        if let Some(word) = expand_bracket(self).terms.keys().next() {
            for g in word {
                if let Generator::X { node, sign, .. } = g {
                    w[node - 1] += sign.as_i32();
                }
            }
        }
        w
    }

    /// Compact text form.
    pub fn render(&self) -> String {
        let list = |v: &[BracketExpr]| v.iter().map(|e| e.render()).collect::<Vec<_>>().join(", ");
        let qs = |v: &[Scalar]| v.iter().map(|c| c.render()).collect::<Vec<_>>().join(", ");
        match self {
            BracketExpr::Leaf(g) => g.render(),
            BracketExpr::Scalar(c) => format!("({})", c.render()),
            BracketExpr::Bracket { left, right, q } => {
                format!("[{}, {}]_({})", left.render(), right.render(), q.render())
            }
            BracketExpr::Product(v) => {
                if v.is_empty() {
                    "1".into()
                } else {
                    v.iter().map(|e| e.render()).collect::<Vec<_>>().join("·")
                }
            }
            BracketExpr::Sum(v) => {
                v.iter().map(|(c, e)| format!("({})·{}", c.render(), e.render())).collect::<Vec<_>>().join(" + ")
            }
            BracketExpr::LeftNest(items, q) => format!("[{}]_({})", list(items), qs(q)),
            BracketExpr::RightNest(items, q) => format!("⟨{}⟩_({})", list(items), qs(q)),
        }
    }

    /// JSON form.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&Wire::from(self)).expect("serializable")
    }

    /// Parses the JSON form.
    pub fn from_json(text: &str) -> Result<BracketExpr, BracketError> {
        let w: Wire = serde_json::from_str(text).map_err(json_error)?;
        BracketExpr::try_from(&w)
    }
}

fn check_arity(items: &[BracketExpr], q: &[Scalar]) -> Result<(), BracketError> {
    if items.is_empty() || q.len() + 1 != items.len() {
        return Err(BracketError::NestArity { items: items.len(), params: q.len() });
    }
    Ok(())
}

fn json_error(e: serde_json::Error) -> BracketError {
    BracketError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}

/// JSON schema of [`BracketExpr`]: externally tagged objects such as
/// `{"bracket": {"q": "r^-1", "left": …, "right": …}}` and `{"x": [1, "+", 0]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum Wire {
    X(usize, String, i32),
    Omega(usize, i32),
    OmegaPrime(usize, i32),
    Gamma(i32),
    GammaPrime(i32),
    Symbol(String),
    Scalar(String),
    Bracket { q: String, left: Box<Wire>, right: Box<Wire> },
    Product(Vec<Wire>),
    Sum(Vec<(String, Wire)>),
    LeftNest { q: Vec<String>, items: Vec<Wire> },
    RightNest { q: Vec<String>, items: Vec<Wire> },
}

impl From<&BracketExpr> for Wire {
    fn from(e: &BracketExpr) -> Wire {
        let qs = |v: &[Scalar]| v.iter().map(|c| c.render()).collect();
        let items = |v: &[BracketExpr]| v.iter().map(Wire::from).collect();
        match e {
            BracketExpr::Leaf(g) => match g {
                Generator::X { node, sign, mode } => Wire::X(*node, sign.symbol().into(), *mode),
                Generator::Omega { node, power } => Wire::Omega(*node, *power),
                Generator::OmegaPrime { node, power } => Wire::OmegaPrime(*node, *power),
                Generator::Gamma(p) => Wire::Gamma(*p),
                Generator::GammaPrime(p) => Wire::GammaPrime(*p),
                Generator::Symbol(s) => Wire::Symbol(s.clone()),
            },
            BracketExpr::Scalar(c) => Wire::Scalar(c.render()),
            BracketExpr::Bracket { left, right, q } => Wire::Bracket {
                q: q.render(),
                left: Box::new(Wire::from(&**left)),
                right: Box::new(Wire::from(&**right)),
            },
            BracketExpr::Product(v) => Wire::Product(items(v)),
            BracketExpr::Sum(v) => Wire::Sum(v.iter().map(|(c, e)| (c.render(), Wire::from(e))).collect()),
            BracketExpr::LeftNest(v, q) => Wire::LeftNest { q: qs(q), items: items(v) },
            BracketExpr::RightNest(v, q) => Wire::RightNest { q: qs(q), items: items(v) },
        }
    }
}

fn parse_q(text: &str) -> Result<Scalar, BracketError> {
    text.parse::<Scalar>().map_err(|source| BracketError::Scalar { text: text.to_string(), source })
}

impl TryFrom<&Wire> for BracketExpr {
    type Error = BracketError;

    fn try_from(w: &Wire) -> Result<BracketExpr, BracketError> {
        let items = |v: &[Wire]| v.iter().map(BracketExpr::try_from).collect::<Result<Vec<_>, _>>();
        let qs = |v: &[String]| v.iter().map(|t| parse_q(t)).collect::<Result<Vec<_>, _>>();
        Ok(match w {
            Wire::X(node, sign, mode) => {
                let sign = match sign.as_str() {
                    "+" => Sign::Plus,
                    "-" => Sign::Minus,
                    other => return Err(BracketError::Sign(other.to_string())),
                };
                BracketExpr::x(*node, sign, *mode)
            }
            Wire::Omega(node, power) => BracketExpr::Leaf(Generator::Omega { node: *node, power: *power }),
            Wire::OmegaPrime(node, power) => BracketExpr::Leaf(Generator::OmegaPrime { node: *node, power: *power }),
            Wire::Gamma(p) => BracketExpr::gamma(*p),
            Wire::GammaPrime(p) => BracketExpr::gamma_prime(*p),
            Wire::Symbol(s) => BracketExpr::symbol(s),
            Wire::Scalar(t) => BracketExpr::Scalar(parse_q(t)?),
            Wire::Bracket { q, left, right } => {
                BracketExpr::bracket(BracketExpr::try_from(&**left)?, BracketExpr::try_from(&**right)?, parse_q(q)?)
            }
            Wire::Product(v) => BracketExpr::Product(items(v)?),
            Wire::Sum(v) => {
                BracketExpr::Sum(v.iter().map(|(c, e)| Ok((parse_q(c)?, BracketExpr::try_from(e)?))).collect::<Result<
                    _,
                    BracketError,
                >>(
                )?)
            }
            Wire::LeftNest { q, items: v } => {
                let (v, q) = (items(v)?, qs(q)?);
                check_arity(&v, &q)?;
                BracketExpr::LeftNest(v, q)
            }
            Wire::RightNest { q, items: v } => {
                let (v, q) = (items(v)?, qs(q)?);
                check_arity(&v, &q)?;
                BracketExpr::RightNest(v, q)
            }
        })
    }
}

/// One word of the free algebra with its coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeWord {
    /// Letters, left to right.
    pub letters: Vec<Generator>,
    /// Coefficient.
    pub coeff: Scalar,
}

/// A finite linear combination of words of the free algebra.
#[derive(Debug, Clone, Default)]
pub struct FreeSum {
    terms: BTreeMap<Vec<Generator>, Scalar>,
}

impl PartialEq for FreeSum {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl FreeSum {
    /// The zero element.
    pub fn zero() -> Self {
        FreeSum::default()
    }

    /// `c` times the empty word.
    pub fn constant(c: Scalar) -> Self {
        let mut out = FreeSum::zero();
        out.add_term(Vec::new(), c);
        out
    }

    /// A single letter.
    pub fn letter(g: Generator) -> Self {
        let mut out = FreeSum::zero();
        out.add_term(vec![g], Scalar::one());
        out
    }

    fn add_term(&mut self, w: Vec<Generator>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(e) => {
                *e = e.add(&c);
                if e.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    /// True when every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    /// Number of words with nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.values().filter(|c| !c.is_zero()).count()
    }

    /// True for the zero element.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coefficient of a word.
    pub fn coeff(&self, w: &[Generator]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Words in lexicographic order.
    pub fn words(&self) -> Vec<FreeWord> {
        self.terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| FreeWord { letters: w.clone(), coeff: c.clone() })
            .collect()
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &FreeSum, c: &Scalar) -> FreeSum {
        let mut out = self.clone();
        for (w, d) in &other.terms {
            out.add_term(w.clone(), d.mul(c));
        }
        out
    }

    /// `self − other`.
    pub fn sub(&self, other: &FreeSum) -> FreeSum {
        self.add_scaled(other, &Scalar::int(-1))
    }

    /// Concatenation product.
    pub fn mul(&self, other: &FreeSum) -> FreeSum {
        let mut out = FreeSum::zero();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                let mut w = a.clone();
                w.extend(b.iter().cloned());
                out.add_term(w, c.mul(d));
            }
        }
        out
    }
}

/// Expands an expression into the free algebra on its leaves.
pub fn expand_bracket(e: &BracketExpr) -> FreeSum {
    match e {
        BracketExpr::Leaf(g) => FreeSum::letter(g.clone()),
        BracketExpr::Scalar(c) => FreeSum::constant(c.clone()),
        BracketExpr::Bracket { left, right, q } => {
            let (a, b) = (expand_bracket(left), expand_bracket(right));
            a.mul(&b).add_scaled(&b.mul(&a), &q.neg())
        }
        BracketExpr::Product(v) => {
            v.iter().fold(FreeSum::constant(Scalar::one()), |acc, x| acc.mul(&expand_bracket(x)))
        }
        BracketExpr::Sum(v) => v.iter().fold(FreeSum::zero(), |acc, (c, x)| acc.add_scaled(&expand_bracket(x), c)),
        BracketExpr::LeftNest(..) | BracketExpr::RightNest(..) => {
            expand_bracket(&e.unnest().expect("nest arity checked at construction"))
        }
    }
}

/// Parameters for the bracket identity suite.
#[derive(Debug, Clone)]
pub struct IdentityParams {
    /// `u`.
    pub u: Scalar,
    /// `v`.
    pub v: Scalar,
    /// `q`.
    pub q: Scalar,
}

impl Default for IdentityParams {
    /// `u = r`, `v = s` as independent indeterminates and a `q` that is a
    /// non-monomial rational function of both.
    fn default() -> Self {
        let q = "(r + 2*s)/(3 + r*s)".parse().expect("valid scalar");
        IdentityParams { u: Scalar::r(), v: Scalar::s(), q }
    }
}

/// Outcome of one free-algebra identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    /// Identity name.
    pub name: String,
    /// Both sides expand to the same element.
    pub pass: bool,
    /// Number of words on the left side.
    pub words: usize,
}

/// Checks the bracket identities over formal letters `a, b, c, b1, b2, b3`.
///
/// The suite covers the product rules for `[a, bc]_v` and `[ab, c]_v`, the two
/// twisted Jacobi identities, the derivation property of a plain bracket on a
/// nest, and the closed forms of the cubic, quartic and quintic nested
/// brackets `[a, …, a, b]` (the cubic one also in its `⟨…⟩` form).
pub fn identity_suite(p: &IdentityParams) -> Vec<IdentityCheck> {
    let a = || BracketExpr::symbol("a");
    let b = || BracketExpr::symbol("b");
    let c = || BracketExpr::symbol("c");
    let br = BracketExpr::bracket;
    let prod = |v: Vec<BracketExpr>| BracketExpr::Product(v);
    let (u, v, q) = (&p.u, &p.v, &p.q);
    let one = Scalar::one();
    let vq = v.div(q).expect("q nonzero");
    let uq = u.div(q).expect("q nonzero");
    let uvq = u.mul(v).div(q).expect("q nonzero");
    let mut out = Vec::new();
    let mut push = |name: &str, lhs: BracketExpr, rhs: BracketExpr| {
        let (l, r) = (expand_bracket(&lhs), expand_bracket(&rhs));
        out.push(IdentityCheck { name: name.into(), pass: l == r, words: l.len() });
    };

    push(
        "product_right",
        br(a(), prod(vec![b(), c()]), v.clone()),
        BracketExpr::sum(vec![
            (one.clone(), prod(vec![br(a(), b(), q.clone()), c()])),
            (q.clone(), prod(vec![b(), br(a(), c(), vq.clone())])),
        ]),
    );
    push(
        "product_left",
        br(prod(vec![a(), b()]), c(), v.clone()),
        BracketExpr::sum(vec![
            (one.clone(), prod(vec![a(), br(b(), c(), q.clone())])),
            (q.clone(), prod(vec![br(a(), c(), vq.clone()), b()])),
        ]),
    );
    push(
        "jacobi_right",
        br(a(), br(b(), c(), u.clone()), v.clone()),
        BracketExpr::sum(vec![
            (one.clone(), br(br(a(), b(), q.clone()), c(), uvq.clone())),
            (q.clone(), br(b(), br(a(), c(), vq.clone()), uq.clone())),
        ]),
    );
    push(
        "jacobi_left",
        br(br(a(), b(), u.clone()), c(), v.clone()),
        BracketExpr::sum(vec![
            (one.clone(), br(a(), br(b(), c(), q.clone()), uvq.clone())),
            (q.clone(), br(br(a(), c(), vq.clone()), b(), uq.clone())),
        ]),
    );

    let bs: Vec<BracketExpr> = (1..=3).map(|i| BracketExpr::symbol(&format!("b{i}"))).collect();
    let nest_q = vec![u.clone(), v.clone()];
    let lhs = br(a(), BracketExpr::left_nest(bs.clone(), nest_q.clone()), one.clone());
    let mut terms = Vec::new();
    for i in 0..bs.len() {
        let mut items = bs.clone();
        items[i] = br(a(), bs[i].clone(), one.clone());
        terms.push((one.clone(), BracketExpr::left_nest(items, nest_q.clone())));
    }
    push("derivation", lhs, BracketExpr::sum(terms));

    let word = |letters: &str| prod(letters.chars().map(|ch| BracketExpr::symbol(&ch.to_string())).collect());
    let uv = u.mul(v);
    let pw = |x: &Scalar, n: i32| x.pow(n).expect("nonzero");
    let qn = |n: i32| qnumber(n, u, v).expect("u ≠ v");

    let cubic = BracketExpr::left_nest(vec![a(), a(), b()], vec![u.clone(), v.clone()]);
    let cubic_closed =
        BracketExpr::sum(vec![(one.clone(), word("aab")), (u.add(v).neg(), word("aba")), (uv.clone(), word("baa"))]);
    push("cubic_closed_form", cubic.clone(), cubic_closed);
    let angle = BracketExpr::right_nest(vec![b(), a(), a()], vec![pw(u, -1), pw(v, -1)]);
    push("cubic_angle_form", cubic, BracketExpr::scaled(uv.clone(), angle));

    let quartic = BracketExpr::left_nest(vec![a(), a(), a(), b()], vec![pw(u, 2), uv.clone(), pw(v, 2)]);
    push(
        "quartic_closed_form",
        quartic,
        BracketExpr::sum(vec![
            (one.clone(), word("aaab")),
            (qn(3).neg(), word("aaba")),
            (uv.mul(&qn(3)), word("abaa")),
            (pw(&uv, 3).neg(), word("baaa")),
        ]),
    );

    let quintic = BracketExpr::left_nest(
        vec![a(), a(), a(), a(), b()],
        vec![pw(u, 3), pw(u, 2).mul(v), u.mul(&pw(v, 2)), pw(v, 3)],
    );
    push(
        "quintic_closed_form",
        quintic,
        BracketExpr::sum(vec![
            (one.clone(), word("aaaab")),
            (qn(4).neg(), word("aaaba")),
            (uv.mul(&qbinomial(4, 2, u, v).expect("u ≠ v")), word("aabaa")),
            (pw(&uv, 3).mul(&qn(4)).neg(), word("abaaa")),
            (pw(&uv, 6), word("baaaa")),
        ]),
    );
    out
}

/// The quantum root vector `x_α^±(k)` along `word` (innermost letter first).
///
/// For `−` this is `[x_{i_n}^-(0), …, x_{i_2}^-(0), x_{i_1}^-(k)]` nested from
/// the left; for `+` it is `⟨x_{i_1}^+(k), x_{i_2}^+(0), …, x_{i_n}^+(0)⟩`
/// nested from the right. Parameters come from
/// [`RootSystem::cascade_parameters`].
pub fn root_vector(rs: &RootSystem, word: &[usize], sign: Sign, k: i32) -> BracketExpr {
    assert!(!word.is_empty(), "empty word");
    if word.len() == 1 {
        return BracketExpr::x(word[0], sign, k);
    }
    let q = rs.cascade_parameters(word, sign);
    let leaf = |m: usize| BracketExpr::x(word[m], sign, if m == 0 { k } else { 0 });
    match sign {
        Sign::Minus => BracketExpr::left_nest((0..word.len()).rev().map(leaf).collect(), q.into_iter().rev().collect()),
        Sign::Plus => BracketExpr::right_nest((0..word.len()).map(leaf).collect(), q),
    }
}

/// Parses a word written as a digit string, e.g. `"134562"`.
pub fn digits(word: &str) -> Vec<usize> {
    word.chars().map(|c| c.to_digit(10).expect("digit") as usize).collect()
}

/// Word of `ε_1 − ε_j` in type `D_n`: `α_1 + … + α_{j−1}`.
pub fn d_alpha_word(j: usize) -> Vec<usize> {
    (1..j).collect()
}

/// Word of `ε_i + ε_j` (`i < j`) in type `D_n`: up the chain from `i` to
/// `n−2`, then `n`, then back down from `n−1` to `j`.
pub fn d_beta_word(n: usize, i: usize, j: usize) -> Vec<usize> {
    assert!(i < j && j <= n, "need i < j ≤ n");
    let mut w: Vec<usize> = (i..=n - 2).collect();
    w.push(n);
    if j < n {
        w.push(n - 1);
        w.extend((j..=n - 2).rev());
    }
    w
}

/// A Chevalley generator of the affine algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Chevalley {
    /// `e_i`.
    E(usize),
    /// `f_i`.
    F(usize),
    /// `ω_i`.
    K(usize),
    /// `ω'_i`.
    KPrime(usize),
}

/// Images of the Chevalley generators in the Drinfeld realization:
/// `e_i ↦ x_i^+(0)`, `f_i ↦ x_i^-(0)`, and for the affine node
/// `e_0 ↦ x_θ^-(1)·γ'^{-1}ω_θ^{-1}`, `f_0 ↦ a·γ^{-1}ω'^{-1}_θ·x_θ^+(−1)`,
/// `ω_0 ↦ γ'^{-1}ω_θ^{-1}`, `ω'_0 ↦ γ^{-1}ω'^{-1}_θ`.
#[derive(Debug, Clone)]
pub struct ChevalleyImages {
    theta: Vec<i32>,
    theta_minus: BracketExpr,
    theta_plus: BracketExpr,
    a: Scalar,
}

impl ChevalleyImages {
    /// Images for a root system.
    pub fn new(rs: &RootSystem) -> Self {
        let word = rs.theta_word().to_vec();
        ChevalleyImages {
            theta: rs.word_root(&word),
            theta_minus: root_vector(rs, &word, Sign::Minus, 1),
            theta_plus: root_vector(rs, &word, Sign::Plus, -1),
            a: rs.iso_constant_a().clone(),
        }
    }

    fn neg_theta(&self) -> Vec<i32> {
        self.theta.iter().map(|x| -x).collect()
    }

    /// `x_θ^-(1)`.
    pub fn theta_minus(&self) -> &BracketExpr {
        &self.theta_minus
    }

    /// `x_θ^+(−1)`.
    pub fn theta_plus(&self) -> &BracketExpr {
        &self.theta_plus
    }

    /// Image of one generator.
    pub fn image(&self, g: Chevalley) -> BracketExpr {
        match g {
            Chevalley::E(0) => BracketExpr::product(vec![
                self.theta_minus.clone(),
                BracketExpr::gamma_prime(-1),
                BracketExpr::omega_weight(&self.neg_theta()),
            ]),
            Chevalley::F(0) => BracketExpr::product(vec![
                BracketExpr::scalar(self.a.clone()),
                BracketExpr::gamma(-1),
                BracketExpr::omega_prime_weight(&self.neg_theta()),
                self.theta_plus.clone(),
            ]),
            Chevalley::K(0) => {
                BracketExpr::product(vec![BracketExpr::gamma_prime(-1), BracketExpr::omega_weight(&self.neg_theta())])
            }
            Chevalley::KPrime(0) => {
                BracketExpr::product(vec![BracketExpr::gamma(-1), BracketExpr::omega_prime_weight(&self.neg_theta())])
            }
            Chevalley::E(i) => BracketExpr::xp(i, 0),
            Chevalley::F(i) => BracketExpr::xm(i, 0),
            Chevalley::K(i) => BracketExpr::Leaf(Generator::Omega { node: i, power: 1 }),
            Chevalley::KPrime(i) => BracketExpr::Leaf(Generator::OmegaPrime { node: i, power: 1 }),
        }
    }

    /// Image of the inverse of `ω_i` or `ω'_i`.
    pub fn image_inverse(&self, g: Chevalley) -> BracketExpr {
        match g {
            Chevalley::K(0) => {
                BracketExpr::product(vec![BracketExpr::gamma_prime(1), BracketExpr::omega_weight(&self.theta)])
            }
            Chevalley::KPrime(0) => {
                BracketExpr::product(vec![BracketExpr::gamma(1), BracketExpr::omega_prime_weight(&self.theta)])
            }
            Chevalley::K(i) => BracketExpr::Leaf(Generator::Omega { node: i, power: -1 }),
            Chevalley::KPrime(i) => BracketExpr::Leaf(Generator::OmegaPrime { node: i, power: -1 }),
            other => panic!("{other:?} is not group-like"),
        }
    }
}

/// Converts expressions to [`Op`]s, sharing structurally equal
/// subexpressions so the evaluator's memoization applies across them.
#[derive(Debug)]
pub struct OpBuilder {
    rank: usize,
    cache: HashMap<String, Op>,
}

impl OpBuilder {
    /// A builder for rank `n`.
    pub fn new(rank: usize) -> Self {
        OpBuilder { rank, cache: HashMap::new() }
    }

    /// The operator of an expression at level one (`γ ↦ r`, `γ' ↦ s`).
    pub fn build(&mut self, e: &BracketExpr) -> Result<Op, BracketError> {
        let key = e.to_json();
        if let Some(op) = self.cache.get(&key) {
            return Ok(op.clone());
        }
        let node = |n: usize| -> Result<usize, BracketError> {
            if n == 0 || n > self.rank {
                Err(BracketError::Node { node: n, rank: self.rank })
            } else {
                Ok(n)
            }
        };
        let op = match e {
            BracketExpr::Leaf(g) => match g {
                Generator::X { node: n, sign, mode } => Op::x(node(*n)?, *sign, *mode),
                Generator::Omega { node: n, power } => {
                    let mut w = vec![0; self.rank];
                    w[node(*n)? - 1] = *power;
                    Op::new(ModeOperator::OmegaWeight(w))
                }
                Generator::OmegaPrime { node: n, power } => {
                    let mut w = vec![0; self.rank];
                    w[node(*n)? - 1] = *power;
                    Op::new(ModeOperator::OmegaPrimeWeight(w))
                }
                Generator::Gamma(p) => Op::scalar(Scalar::r().pow(*p).expect("nonzero")),
                Generator::GammaPrime(p) => Op::scalar(Scalar::s().pow(*p).expect("nonzero")),
                Generator::Symbol(s) => return Err(BracketError::NotRepresentable(s.clone())),
            },
            BracketExpr::Scalar(c) => Op::scalar(c.clone()),
            BracketExpr::Bracket { left, right, q } => Op::bracket(self.build(left)?, self.build(right)?, q.clone()),
            BracketExpr::Product(v) => Op::product(v.iter().map(|x| self.build(x)).collect::<Result<Vec<_>, _>>()?),
            BracketExpr::Sum(v) => Op::sum(
                v.iter().map(|(c, x)| Ok((c.clone(), self.build(x)?))).collect::<Result<Vec<_>, BracketError>>()?,
            ),
            BracketExpr::LeftNest(..) | BracketExpr::RightNest(..) => {
                let flat = e.unnest()?;
                self.build(&flat)?
            }
        };
        self.cache.insert(key, op.clone());
        Ok(op)
    }
}

/// The Fock-space operator of an expression of rank `n` at level one.
pub fn to_operator(rank: usize, e: &BracketExpr) -> Result<Op, BracketError> {
    OpBuilder::new(rank).build(e)
}

/// One nonzero column of an operator's matrix on the window.
#[derive(Debug, Clone)]
pub struct MatrixColumn {
    /// Input basis state.
    pub input: FockState,
    /// Image terms with coefficients rendered in the `a_i(-n)` basis.
    pub image: Vec<(FockState, String)>,
}

/// Nonzero columns of an expression's matrix on the window states of a
/// checker, in basis order.
pub fn matrix_entries<F: Field>(ch: &mut Checker<F>, e: &BracketExpr) -> Result<Vec<MatrixColumn>, BracketError> {
    let op = to_operator(ch.root_system().rank(), e)?;
    let states: Vec<FockState> = ch.states().to_vec();
    let mut out = Vec::new();
    for s in states {
        let v = ch.evaluator().apply_state(&op, &s);
        if !v.is_zero() {
            let fock = ch.evaluator().engine().fock();
            let field = fock.field();
            let image = v.iter().map(|(t, c)| (t.clone(), field.render(&fock.a_basis_coeff(t, c)))).collect();
            out.push(MatrixColumn { input: s, image });
        }
    }
    Ok(out)
}

/// What a catalog entry asserts.
#[derive(Debug, Clone, PartialEq)]
pub enum Expected {
    /// The expression is the zero operator.
    Zero,
    /// The expression equals another one.
    Equals(BracketExpr),
}

/// One executable identity of the catalog.
#[derive(Debug, Clone)]
pub struct LemmaEntry {
    /// Identifier, unique within a root system.
    pub name: String,
    /// Expression.
    pub expr: BracketExpr,
    /// Asserted value.
    pub expected: Expected,
}

impl LemmaEntry {
    fn zero(name: String, expr: BracketExpr) -> Self {
        LemmaEntry { name, expr, expected: Expected::Zero }
    }

    fn equals(name: String, expr: BracketExpr, rhs: BracketExpr) -> Self {
        LemmaEntry { name, expr, expected: Expected::Equals(rhs) }
    }

    /// The `τ`-image of the entry.
    pub fn tau(&self) -> LemmaEntry {
        LemmaEntry {
            name: format!("tau:{}", self.name),
            expr: self.expr.tau(),
            expected: match &self.expected {
                Expected::Zero => Expected::Zero,
                Expected::Equals(e) => Expected::Equals(e.tau()),
            },
        }
    }

    /// Catalog file form.
    pub fn to_json(&self) -> serde_json::Value {
        let expr: serde_json::Value = serde_json::from_str(&self.expr.to_json()).expect("json");
        let expected = match &self.expected {
            Expected::Zero => serde_json::Value::String("zero".into()),
            Expected::Equals(e) => {
                serde_json::json!({ "equals": serde_json::from_str::<serde_json::Value>(&e.to_json()).expect("json") })
            }
        };
        serde_json::json!({ "name": self.name, "expr": expr, "expected": expected })
    }
}

/// Version tag of the catalog file format.
pub const CATALOG_SCHEMA: &str = "qaffine-lemma-catalog/1";

/// Serializes a catalog with its schema tag and root system.
pub fn catalog_to_json(rs: &RootSystem, entries: &[LemmaEntry]) -> String {
    let v = serde_json::json!({
        "schema": CATALOG_SCHEMA,
        "type": rs.lie_type().to_string(),
        "entries": entries.iter().map(LemmaEntry::to_json).collect::<Vec<_>>(),
    });
    serde_json::to_string_pretty(&v).expect("json")
}

/// Parses a catalog file written by [`catalog_to_json`].
pub fn catalog_from_json(text: &str) -> Result<Vec<LemmaEntry>, BracketError> {
    #[derive(Deserialize)]
    struct File {
        schema: String,
        entries: Vec<EntryWire>,
    }
    #[derive(Deserialize)]
    struct EntryWire {
        name: String,
        expr: Wire,
        expected: ExpectedWire,
    }
    #[derive(Deserialize)]
    #[serde(rename_all = "snake_case")]
    enum ExpectedWire {
        Zero,
        Equals(Wire),
    }
    let f: File = serde_json::from_str(text).map_err(json_error)?;
    if f.schema != CATALOG_SCHEMA {
        return Err(BracketError::Parse { line: 1, column: 1, message: format!("unknown schema {:?}", f.schema) });
    }
    f.entries
        .iter()
        .map(|e| {
            Ok(LemmaEntry {
                name: e.name.clone(),
                expr: BracketExpr::try_from(&e.expr)?,
                expected: match &e.expected {
                    ExpectedWire::Zero => Expected::Zero,
                    ExpectedWire::Equals(w) => Expected::Equals(BracketExpr::try_from(w)?),
                },
            })
        })
        .collect()
}

fn mono(a: i32, b: i32) -> Scalar {
    Scalar::mono(Rat::ONE, 4 * a, 4 * b)
}

/// `(γ ω'_β − γ' ω_β)/(r − s)`.
fn cartan_difference(beta: &[i32], factor: Scalar) -> BracketExpr {
    let inv = Scalar::r().sub(&Scalar::s()).inv().expect("r ≠ s");
    let c = factor.mul(&inv);
    BracketExpr::sum(vec![
        (c.clone(), BracketExpr::product(vec![BracketExpr::gamma(1), BracketExpr::omega_prime_weight(beta)])),
        (c.neg(), BracketExpr::product(vec![BracketExpr::gamma_prime(1), BracketExpr::omega_weight(beta)])),
    ])
}

/// A three-term combination `w₀ − c₁·w₁ + c₂·w₂` of words in `x` and `y`,
/// each word spelled by a pattern such as `"xxy"`.
fn serre3(x: &BracketExpr, y: &BracketExpr, c1: Scalar, c2: Scalar, pattern: [&str; 3]) -> BracketExpr {
    let word =
        |p: &str| BracketExpr::product(p.chars().map(|ch| if ch == 'x' { x.clone() } else { y.clone() }).collect());
    BracketExpr::sum(vec![(Scalar::one(), word(pattern[0])), (c1.neg(), word(pattern[1])), (c2, word(pattern[2]))])
}

/// The parameter of the commutator of `x_i^-(0)` with `x_θ^-(1)`: `⟨i, θ⟩`.
fn theta_parameter(rs: &RootSystem, i: usize) -> Scalar {
    let theta = rs.word_root(rs.theta_word());
    rs.pairing_lattice_rev(i, &theta)
}

/// Parameters making each step of a bracket of `E_j`'s around `E_0` a plain
/// commutator with the `x^-` part: `⟨j, κ⟩^{-1}` where `κ` is the
/// `ω`-weight accumulated so far, starting from `−θ`. `outer_first` lists
/// the `E_j`, outermost first; the result is innermost first.
pub fn membership_parameters(rs: &RootSystem, outer_first: &[usize]) -> Vec<Scalar> {
    let mut kappa: Vec<i32> = rs.word_root(rs.theta_word()).iter().map(|x| -x).collect();
    let mut out = Vec::new();
    for &j in outer_first.iter().rev() {
        out.push(rs.pairing_lattice_rev(j, &kappa).inv().expect("monomial"));
        kappa[j - 1] += 1;
    }
    out
}

/// The expression `x_1^-(1) = a·[E_{j_1}, …, E_{j_m}, E_0]_{(q)}·γ'ω_1`
/// with parameters given innermost first and `a` the isomorphism constant.
fn membership_entry(
    rs: &RootSystem,
    imgs: &ChevalleyImages,
    name: &str,
    outer_first: &[usize],
    inner_first_q: Vec<Scalar>,
) -> LemmaEntry {
    let mut items: Vec<BracketExpr> = outer_first.iter().map(|&j| imgs.image(Chevalley::E(j))).collect();
    items.push(imgs.image(Chevalley::E(0)));
    let nest = BracketExpr::left_nest(items, inner_first_q.into_iter().rev().collect());
    let lhs = BracketExpr::product(vec![
        BracketExpr::scalar(rs.iso_constant_a().clone()),
        nest,
        BracketExpr::gamma_prime(1),
        BracketExpr::Leaf(Generator::Omega { node: 1, power: 1 }),
    ]);
    LemmaEntry::equals(name.to_string(), lhs, BracketExpr::xm(1, 1))
}

/// The executable catalog of bracket identities for a root system.
///
/// Every type gets the vanishing of `[x_i^-(0), x_θ^-(1)]_{⟨i,θ⟩}` for all
/// finite `i`. Type A adds the chain commutators
/// `[x_α^-(1), x_α^+(−1)] = (γω'_α − γ'ω_α)/(r−s)`. Type D adds the
/// vanishing brackets among the vectors of `ε_1 ± ε_j` and `ε_i + ε_j`, the
/// ladder of commutators `[x_{ε_1+ε_m}^-(1), x_{ε_1+ε_m}^+(−1)]`, the Serre
/// relations involving `E_0`/`F_0`, and the expression of `x_1^∓(±1)` through
/// Chevalley images. Type E6 adds its vanishing brackets, its Serre
/// relations with the affine node and the same membership displays.
pub fn lemma_catalog(rs: &RootSystem) -> Vec<LemmaEntry> {
    let n = rs.rank();
    let imgs = ChevalleyImages::new(rs);
    let rv = |w: &[usize], sign: Sign, k: i32| root_vector(rs, w, sign, k);
    let mut out = Vec::new();
    let theta_m = imgs.theta_minus().clone();

    for i in 1..=n {
        out.push(LemmaEntry::zero(
            format!("theta_commute(i={i})"),
            BracketExpr::bracket(BracketExpr::xm(i, 0), theta_m.clone(), theta_parameter(rs, i)),
        ));
    }

    let e = |i: usize| imgs.image(Chevalley::E(i));
    let f = |i: usize| imgs.image(Chevalley::F(i));
    let rs_ = mono(1, 1);
    let r_plus_s = Scalar::r().add(&Scalar::s());

    match rs.lie_type().family {
        Family::A => {
            for j in 1..=n {
                let w = d_alpha_word(j + 1);
                let alpha = rs.word_root(&w);
                out.push(LemmaEntry::equals(
                    format!("chain_commutator(j={j})"),
                    BracketExpr::commutator(rv(&w, Sign::Minus, 1), rv(&w, Sign::Plus, -1)),
                    cartan_difference(&alpha, Scalar::one()),
                ));
            }
        }
        Family::D => {
            let beta = |i: usize, j: usize| rv(&d_beta_word(n, i, j), Sign::Minus, 1);
            let alpha = |j: usize| rv(&d_alpha_word(j), Sign::Minus, 1);
            let sinv = mono(0, -1);
            for i in 2..n {
                out.push(LemmaEntry::zero(
                    format!("beta_skew(i={i})"),
                    BracketExpr::bracket(BracketExpr::xm(i - 1, 0), beta(i - 1, i + 1), sinv.clone()),
                ));
            }
            for i in 1..n {
                out.push(LemmaEntry::zero(
                    format!("beta_adjacent(i={i})"),
                    BracketExpr::bracket(BracketExpr::xm(i, 0), beta(i, i + 1), mono(-1, -1)),
                ));
            }
            out.push(LemmaEntry::zero(
                "beta14_commute".into(),
                BracketExpr::commutator(BracketExpr::xm(2, 0), beta(1, 4)),
            ));
            for i in 3..=n.saturating_sub(2) {
                out.push(LemmaEntry::zero(
                    format!("beta_far_commute(i={i})"),
                    BracketExpr::commutator(BracketExpr::xm(i, 0), beta(1, i + 2)),
                ));
            }
            for i in 3..n {
                out.push(LemmaEntry::zero(
                    format!("beta_s_commute(i={i})"),
                    BracketExpr::bracket(BracketExpr::xm(i, 0), beta(1, i), sinv.clone()),
                ));
            }
            out.push(LemmaEntry::zero(
                "alpha_serre".into(),
                BracketExpr::left_nest(
                    vec![BracketExpr::xm(n, 0), BracketExpr::xm(n, 0), alpha(n)],
                    vec![mono(1, 2), mono(2, 1)],
                ),
            ));
            out.push(LemmaEntry::zero(
                "beta13_beta12".into(),
                BracketExpr::bracket(beta(1, 3), beta(1, 2), Scalar::s()),
            ));
            out.push(LemmaEntry::zero(
                "x1_beta13".into(),
                BracketExpr::bracket(BracketExpr::xm(1, 1), beta(1, 3), mono(-1, 0)),
            ));
            out.push(LemmaEntry::zero(
                "x2_x1_theta".into(),
                BracketExpr::commutator(
                    BracketExpr::xm(2, 0),
                    BracketExpr::bracket(BracketExpr::xm(1, 1), theta_m.clone(), mono(-2, 0)),
                ),
            ));
            out.push(LemmaEntry::zero("x2_alpha14".into(), BracketExpr::commutator(BracketExpr::xm(2, 0), alpha(4))));
            out.push(LemmaEntry::zero(
                "alpha_serre_short".into(),
                BracketExpr::left_nest(
                    vec![BracketExpr::xm(n, 0), BracketExpr::xm(n, 0), alpha(n - 1)],
                    vec![Scalar::s(), Scalar::r()],
                ),
            ));
            let ab = d_alpha_word(n - 1);
            out.push(LemmaEntry::equals(
                "ladder_base".into(),
                BracketExpr::commutator(rv(&ab, Sign::Minus, 1), rv(&ab, Sign::Plus, -1)),
                cartan_difference(&rs.word_root(&ab), Scalar::one()),
            ));
            for m in (2..=n).rev() {
                let w = d_beta_word(n, 1, m);
                out.push(LemmaEntry::equals(
                    format!("ladder(m={m})"),
                    BracketExpr::commutator(rv(&w, Sign::Minus, 1), rv(&w, Sign::Plus, -1)),
                    cartan_difference(&rs.word_root(&w), rs_.pow(m as i32 - n as i32).expect("nonzero")),
                ));
            }
            let rs2 = rs_.pow(2).expect("nonzero");
            out.push(LemmaEntry::zero(
                "serre_e0_en".into(),
                BracketExpr::difference(
                    BracketExpr::product(vec![e(n), e(0)]),
                    BracketExpr::scaled(rs2.clone(), BracketExpr::product(vec![e(0), e(n)])),
                ),
            ));
            out.push(LemmaEntry::zero(
                "serre_e0_e2e2".into(),
                serre3(&e(2), &e(0), r_plus_s.clone(), rs_.clone(), ["yxx", "xyx", "xxy"]),
            ));
            out.push(LemmaEntry::zero(
                "serre_e0e0_e2".into(),
                serre3(&e(0), &e(2), r_plus_s.clone(), rs_.clone(), ["xxy", "xyx", "yxx"]),
            ));
            out.push(LemmaEntry::zero(
                "serre_f0_fn".into(),
                BracketExpr::difference(
                    BracketExpr::product(vec![f(0), f(n)]),
                    BracketExpr::scaled(rs2, BracketExpr::product(vec![f(n), f(0)])),
                ),
            ));
            out.push(LemmaEntry::zero(
                "serre_f2_f0f0".into(),
                serre3(&f(0), &f(2), r_plus_s.clone(), rs_.clone(), ["yxx", "xyx", "xxy"]),
            ));
            out.push(LemmaEntry::zero(
                "serre_f2f2_f0".into(),
                serre3(&f(2), &f(0), r_plus_s, rs_.clone(), ["xxy", "xyx", "yxx"]),
            ));

            let mut outer: Vec<usize> = (2..=n - 2).collect();
            outer.push(n);
            outer.push(n - 1);
            outer.extend((2..=n - 2).rev());
            let mut params = vec![mono(0, -1); n - 2];
            params.extend(vec![Scalar::r(); n - 2]);
            let m = membership_entry(rs, &imgs, "x1_minus_membership", &outer, params);
            out.push(m.clone());
            let mut t = m.tau();
            t.name = "x1_plus_membership".into();
            out.push(t);
        }
        Family::E => {
            let x = |w: &str| rv(&digits(w), Sign::Minus, 1);
            let z = |name: &str, i: usize, w: &str, q: Scalar| {
                LemmaEntry::zero(name.into(), BracketExpr::bracket(BracketExpr::xm(i, 0), x(w), q))
            };
            let rsinv = mono(-1, -1);
            out.push(z("x2_134562435", 2, "134562435", rsinv.clone()));
            out.push(z("x4_1345624", 4, "1345624", Scalar::r()));
            out.push(z("x3_1345624354", 3, "1345624354", rsinv.clone()));
            out.push(z("x1_1345624354", 1, "1345624354", rsinv.clone()));
            out.push(z("x4_13456", 4, "13456", Scalar::one()));
            out.push(z("x2_1345624", 2, "1345624", rsinv));
            out.push(z("x3_134562435", 3, "134562435", mono(0, -1)));
            out.push(z("x3_134562", 3, "134562", Scalar::one()));
            out.push(z("x5_134562", 5, "134562", Scalar::one()));
            out.push(LemmaEntry::zero(
                "x4_x5_1345624".into(),
                BracketExpr::left_nest(
                    vec![BracketExpr::xm(4, 0), BracketExpr::xm(5, 0), x("1345624")],
                    vec![Scalar::one(), Scalar::s()],
                ),
            ));
            let c1 = rs_.mul(&r_plus_s);
            let c2 = rs_.pow(3).expect("nonzero");
            out.push(LemmaEntry::zero(
                "serre_e0_e2e2".into(),
                serre3(&e(2), &e(0), c1.clone(), c2.clone(), ["yxx", "xyx", "xxy"]),
            ));
            out.push(LemmaEntry::zero(
                "serre_e0e0_e2".into(),
                serre3(&e(0), &e(2), c1.clone(), c2.clone(), ["xxy", "xyx", "yxx"]),
            ));
            out.push(LemmaEntry::zero(
                "serre_f2f2_f0".into(),
                serre3(&f(2), &f(0), c1.clone(), c2.clone(), ["xxy", "xyx", "yxx"]),
            ));
            out.push(LemmaEntry::zero("serre_f2_f0f0".into(), serre3(&f(0), &f(2), c1, c2, ["yxx", "xyx", "xxy"])));

            let outer = digits("3456243542");
            let params = vec![
                mono(-1, -2),
                Scalar::r(),
                Scalar::r(),
                mono(0, -1),
                Scalar::r(),
                mono(0, -1),
                Scalar::r(),
                Scalar::r(),
                Scalar::r(),
                Scalar::r(),
            ];
            let m = membership_entry(rs, &imgs, "x1_minus_membership", &outer, params);
            out.push(m.clone());
            let mut t = m.tau();
            t.name = "x1_plus_membership".into();
            out.push(t);
        }
    }
    out
}

/// Checks one catalog entry on the admissible window states.
pub fn check_lemma<F: Field>(
    ch: &mut Checker<F>,
    builder: &mut OpBuilder,
    family: &str,
    entry: &LemmaEntry,
) -> Result<InstanceReport, BracketError> {
    let lhs = builder.build(&entry.expr)?;
    let rhs = match &entry.expected {
        Expected::Zero => Op::scalar(Scalar::zero()),
        Expected::Equals(e) => builder.build(e)?,
    };
    Ok(ch.check(family, &[("name", entry.name.clone())], &lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Truncation;
    use crate::relations::Status;
    use crate::scalars::ExactField;
    use crate::vertex::VertexEngine;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn sym(n: &str) -> BracketExpr {
        BracketExpr::symbol(n)
    }

    fn word(s: &str) -> Vec<Generator> {
        s.chars().map(|c| Generator::Symbol(c.to_string())).collect()
    }

    #[test]
    fn plain_bracket_of_a_letter_with_itself_cancels() {
        let e = expand_bracket(&BracketExpr::commutator(sym("a"), sym("a")));
        assert!(e.is_zero());
        let e = expand_bracket(&BracketExpr::commutator(sym("a"), sym("b")));
        assert_eq!(e.len(), 2);
        assert_eq!(e.coeff(&word("ab")), Scalar::one());
        assert_eq!(e.coeff(&word("ba")), Scalar::int(-1));
    }

    #[test]
    fn cubic_nest_expands_to_closed_form() {
        let (u, v) = (Scalar::r(), Scalar::s());
        let e = expand_bracket(&BracketExpr::left_nest(vec![sym("a"), sym("a"), sym("b")], vec![u.clone(), v.clone()]));
        assert_eq!(e.len(), 3);
        assert_eq!(e.coeff(&word("aab")), Scalar::one());
        assert_eq!(e.coeff(&word("aba")), u.add(&v).neg());
        assert_eq!(e.coeff(&word("baa")), u.mul(&v));
    }

    #[test]
    fn identity_suite_passes_symbolically() {
        let res = identity_suite(&IdentityParams::default());
        assert_eq!(res.len(), 9);
        for c in &res {
            assert!(c.pass, "{} failed", c.name);
            assert!(c.words > 0);
        }
    }

    #[test]
    fn product_rule_specializes_at_v_equal_q() {
        let q = Scalar::r();
        let lhs = BracketExpr::bracket(sym("a"), BracketExpr::product(vec![sym("b"), sym("c")]), q.clone());
        let rhs = BracketExpr::sum(vec![
            (Scalar::one(), BracketExpr::product(vec![BracketExpr::bracket(sym("a"), sym("b"), q.clone()), sym("c")])),
            (q, BracketExpr::product(vec![sym("b"), BracketExpr::commutator(sym("a"), sym("c"))])),
        ]);
        assert_eq!(expand_bracket(&lhs), expand_bracket(&rhs));
    }

    #[test]
    fn wrong_coefficient_is_detected() {
        let p = IdentityParams { u: Scalar::r(), v: Scalar::r(), q: Scalar::s() };
        let (u, v) = (p.u.clone(), p.v.clone());
        let e = expand_bracket(&BracketExpr::left_nest(vec![sym("a"), sym("a"), sym("b")], vec![u, v]));
        assert_ne!(e.coeff(&word("aba")), Scalar::r().neg());
    }

    #[test]
    fn json_round_trip_and_schema() {
        let e = BracketExpr::bracket(BracketExpr::xp(1, -1), BracketExpr::xm(2, 0), "r^-1*s".parse().unwrap());
        let text = e.to_json();
        assert!(text.starts_with("{\"bracket\":{\"q\":"));
        assert!(text.contains("{\"x\":[1,\"+\",-1]}"));
        assert_eq!(BracketExpr::from_json(&text).unwrap(), e);
        let leaf = BracketExpr::from_json(r#"{"x": [1, "+", -1]}"#).unwrap();
        assert_eq!(leaf, BracketExpr::xp(1, -1));
        assert!(matches!(BracketExpr::from_json("{\"x\": [1, \"+\""), Err(BracketError::Parse { .. })));
        assert!(matches!(BracketExpr::from_json(r#"{"x": [1, "*", 0]}"#), Err(BracketError::Sign(_))));
        assert!(matches!(
            BracketExpr::from_json(r#"{"left_nest": {"q": [], "items": [{"x":[1,"+",0]},{"x":[2,"+",0]}]}}"#),
            Err(BracketError::NestArity { .. })
        ));
    }

    #[test]
    fn length_one_root_vector_is_a_leaf() {
        let rs = RootSystem::from_name("A2").unwrap();
        assert_eq!(root_vector(&rs, &[2], Sign::Plus, 3), BracketExpr::xp(2, 3));
        assert_eq!(root_vector(&rs, &[1], Sign::Minus, -1), BracketExpr::xm(1, -1));
    }

    #[test]
    fn theta_root_vector_uses_theta_parameters() {
        for name in ["A2", "A4", "D4", "D5", "E6"] {
            let rs = RootSystem::from_name(name).unwrap();
            let w = rs.theta_word().to_vec();
            match root_vector(&rs, &w, Sign::Minus, 1) {
                BracketExpr::LeftNest(items, q) => {
                    let mut inner_first = q.clone();
                    inner_first.reverse();
                    assert_eq!(inner_first, rs.theta_bracket_parameters(Sign::Minus));
                    assert_eq!(items.last(), Some(&BracketExpr::xm(w[0], 1)));
                }
                other => panic!("unexpected {other:?}"),
            }
            match root_vector(&rs, &w, Sign::Plus, -1) {
                BracketExpr::RightNest(items, q) => {
                    assert_eq!(q, rs.theta_bracket_parameters(Sign::Plus));
                    assert_eq!(items[0], BracketExpr::xp(w[0], -1));
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn a_type_theta_parameters_are_all_s() {
        let rs = RootSystem::from_name("A4").unwrap();
        for q in rs.cascade_parameters(&d_alpha_word(5), Sign::Minus) {
            assert_eq!(q, Scalar::s());
        }
    }

    #[test]
    fn d_type_beta_parameters_are_s_then_r_inverse() {
        let rs = RootSystem::from_name("D5").unwrap();
        let w = d_beta_word(5, 1, 2);
        assert_eq!(w, rs.theta_word());
        let q = rs.cascade_parameters(&w, Sign::Minus);
        let split = q.iter().position(|x| *x != Scalar::s()).unwrap();
        assert!(q[split..].iter().all(|x| *x == mono(-1, 0)), "{q:?}");
        assert_eq!(d_beta_word(5, 4, 5), vec![5]);
        assert_eq!(d_beta_word(5, 1, 5), vec![1, 2, 3, 5]);
    }

    #[test]
    fn tau_reverses_root_vectors() {
        let rs = RootSystem::from_name("D4").unwrap();
        let w = rs.theta_word().to_vec();
        let minus = root_vector(&rs, &w, Sign::Minus, 2);
        let plus = root_vector(&rs, &w, Sign::Plus, -2);
        let t = minus.tau();
        match (&t, &plus) {
            (BracketExpr::RightNest(ti, tq), BracketExpr::RightNest(pi, pq)) => {
                assert_eq!(ti, pi);
                assert_eq!(tq.len(), pq.len());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(t.tau(), minus);
    }

    #[test]
    fn tau_is_an_anti_automorphism_on_words() {
        let e = BracketExpr::bracket(sym("a"), BracketExpr::product(vec![sym("b"), sym("c")]), Scalar::r());
        let lhs = expand_bracket(&e.tau());
        let expected = expand_bracket(&BracketExpr::bracket(
            BracketExpr::product(vec![sym("c"), sym("b")]),
            sym("a"),
            Scalar::s(),
        ));
        assert_eq!(lhs, expected);
    }

    fn checker(name: &str, t: Truncation) -> Checker<ExactField> {
        let rs = Arc::new(RootSystem::from_name(name).unwrap());
        Checker::new(Arc::new(VertexEngine::new(rs, ExactField)), t)
    }

    #[test]
    fn leaf_operator_is_the_mode_operator() {
        let op = to_operator(2, &BracketExpr::xp(1, 0)).unwrap();
        assert!(matches!(op.kind(), ModeOperator::X { node: 1, sign: Sign::Plus, mode: 0 }));
        assert!(matches!(to_operator(2, &sym("a")), Err(BracketError::NotRepresentable(_))));
        assert!(matches!(to_operator(2, &BracketExpr::xp(3, 0)), Err(BracketError::Node { .. })));
    }

    #[test]
    fn commutator_of_x_plus_and_x_minus_kills_vacuum() {
        let mut ch = checker("A2", Truncation::default());
        let e = BracketExpr::commutator(BracketExpr::xp(1, 0), BracketExpr::xm(1, 0));
        let op = to_operator(2, &e).unwrap();
        let v = ch.evaluator().apply_state(&op, &FockState::vacuum(2));
        assert!(v.is_zero());
    }

    #[test]
    fn a2_catalog_holds() {
        let rs = RootSystem::from_name("A2").unwrap();
        let mut ch = checker("A2", Truncation::default());
        let mut b = OpBuilder::new(2);
        for entry in lemma_catalog(&rs) {
            let rep = check_lemma(&mut ch, &mut b, "lemma", &entry).unwrap();
            assert_eq!(rep.status, Status::Pass, "{}: {:?}", entry.name, rep.counterexample);
            assert!(rep.tested_states >= 10, "{} tested {}", entry.name, rep.tested_states);
        }
    }

    #[test]
    fn catalog_file_round_trip() {
        let rs = RootSystem::from_name("D4").unwrap();
        let cat = lemma_catalog(&rs);
        let text = catalog_to_json(&rs, &cat);
        let back = catalog_from_json(&text).unwrap();
        assert_eq!(back.len(), cat.len());
        for (a, b) in back.iter().zip(&cat) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.expr, b.expr);
            assert_eq!(a.expected, b.expected);
        }
    }

    fn d4_checker() -> (RootSystem, Checker<ExactField>) {
        (RootSystem::from_name("D4").unwrap(), checker("D4", Truncation { max_osc_degree: 3, beta_box: 3 }))
    }

    #[test]
    fn d4_catalog_and_its_tau_image_hold() {
        let (rs, mut ch) = d4_checker();
        let mut b = OpBuilder::new(4);
        for entry in lemma_catalog(&rs) {
            for e in [entry.clone(), entry.tau()] {
                let rep = check_lemma(&mut ch, &mut b, "lemma", &e).unwrap();
                assert_eq!(rep.status, Status::Pass, "{}: {:?}", e.name, rep.counterexample);
                assert!(rep.tested_states >= 10, "{} tested {}", e.name, rep.tested_states);
            }
        }
    }

    #[test]
    fn membership_needs_the_isomorphism_constant() {
        let (rs, mut ch) = d4_checker();
        let mut b = OpBuilder::new(4);
        let entry = lemma_catalog(&rs).into_iter().find(|e| e.name == "x1_minus_membership").unwrap();
        let BracketExpr::Product(factors) = &entry.expr else { panic!("product expected") };
        let unscaled = LemmaEntry { expr: BracketExpr::Product(factors[1..].to_vec()), ..entry.clone() };
        let rep = check_lemma(&mut ch, &mut b, "lemma", &unscaled).unwrap();
        assert_eq!(rep.status, Status::Fail);
    }

    #[test]
    fn serre_combination_of_f0_with_non_adjacent_f1_does_not_vanish() {
        let (rs, mut ch) = d4_checker();
        let imgs = ChevalleyImages::new(&rs);
        let (f0, f1) = (imgs.image(Chevalley::F(0)), imgs.image(Chevalley::F(1)));
        let e = serre3(&f0, &f1, Scalar::r().add(&Scalar::s()), mono(1, 1), ["yxx", "xyx", "xxy"]);
        let mut b = OpBuilder::new(4);
        let rep = check_lemma(&mut ch, &mut b, "lemma", &LemmaEntry::zero("f1".into(), e)).unwrap();
        assert_eq!(rep.status, Status::Fail);
    }

    fn arb_rat_scalar() -> impl Strategy<Value = Scalar> {
        (1i64..40, 1i64..40, prop::bool::ANY).prop_map(|(a, b, neg)| {
            let c = Rat::new(if neg { -a } else { a }, b);
            Scalar::rat(c)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn identity_suite_with_random_rational_parameters(u in arb_rat_scalar(), v in arb_rat_scalar(), q in arb_rat_scalar()) {
            prop_assume!(u != v);
            for c in identity_suite(&IdentityParams { u, v, q }) {
                prop_assert!(c.pass, "{}", c.name);
            }
        }

        #[test]
        fn json_round_trip_of_random_brackets(i in 1usize..4, j in 1usize..4, k in -3i32..4, a in -2i32..3, b in -2i32..3) {
            let e = BracketExpr::left_nest(
                vec![BracketExpr::xm(i, 0), BracketExpr::xp(j, k), BracketExpr::Leaf(Generator::Omega { node: i, power: a })],
                vec![mono(a, b), Scalar::rs_half(b)],
            );
            prop_assert_eq!(BracketExpr::from_json(&e.to_json()).unwrap(), e);
        }
    }
}
