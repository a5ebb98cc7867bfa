use std::fmt;

use crate::kernel::{Sort, Term, VarContext};
use crate::store::{Loc, Locations, Store, Transition};

/// Instantiation bounds for schemes with a join arity parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Largest `α` for the strict-distributivity schemes.
    pub max_join_arity: usize,
    /// Largest `α`, `βᵢ` and `γ` for ND-squash.
    pub squash_arity: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_join_arity: 4,
            squash_arity: 3,
        }
    }
}

/// The shape of the axiom as stated, before any inequation is encoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemeKind {
    Associativity,
    Commutativity,
    Idempotency,
    Neutrality,
    NdReturn,
    NdSquash,
    UL,
    UU,
    UUC,
    LU,
    NdU,
    NdAcquire,
    NdRelease,
    Empty,
    Fuse,
    NdB,
    M,
    S,
    H,
    NdT,
    SeqEq,
    SeqNe,
    HS,
}

impl SchemeKind {
    pub fn tag(self) -> &'static str {
        use SchemeKind::*;
        match self {
            Associativity => "Associativity",
            Commutativity => "Commutativity",
            Idempotency => "Idempotency",
            Neutrality => "Neutrality",
            NdReturn => "ND-return",
            NdSquash => "ND-squash",
            UL => "UL",
            UU => "UU",
            UUC => "UUC",
            LU => "LU",
            NdU => "ND-U",
            NdAcquire => "ND-◁",
            NdRelease => "ND-▷",
            Empty => "Empty",
            Fuse => "Fuse",
            NdB => "ND-B",
            M => "M",
            S => "S",
            H => "H",
            NdT => "ND-T",
            SeqEq => "Seq=",
            SeqNe => "Seq≠",
            HS => "HS",
        }
    }

    pub fn relation(self) -> Relation {
        match self {
            SchemeKind::Fuse | SchemeKind::M | SchemeKind::S | SchemeKind::H => Relation::Ge,
            _ => Relation::Eq,
        }
    }
}

/// A ground axiom instance `ctx ⊢ lhs = rhs`, inequations already encoded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomInstance {
    pub scheme: &'static str,
    /// The scheme parameters, e.g. `ℓ=y b=0`.
    pub params: String,
    pub relation: Relation,
    pub ctx: VarContext,
    pub lhs: Term,
    pub rhs: Term,
}

/// An axiom scheme at a given sort, enumerating its instances on demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxiomScheme {
    kind: SchemeKind,
    sort: Sort,
}

fn var(name: &str, sort: Sort) -> Term {
    Term::var(name, sort)
}

fn vars(prefix: &str, n: usize, sort: Sort) -> Vec<Term> {
    (0..n).map(|i| var(&format!("{prefix}{i}"), sort)).collect()
}

fn join(sort: Sort, ts: Vec<Term>) -> Term {
    Term::join(sort, ts).expect("join arguments share the sort")
}

fn or(a: Term, b: Term) -> Term {
    Term::or(a, b).expect("join arguments share the sort")
}

fn ctx_of(terms: &[&Term]) -> VarContext {
    let mut ctx = VarContext::new();
    for t in terms {
        for (n, s) in t.free_vars() {
            if ctx.get(&n).is_none() {
                ctx.declare(n, s).expect("fresh");
            }
        }
    }
    ctx
}

fn tr(from: Store, to: Store, x: Term) -> Term {
    Term::transition(Transition::new(from, to), x)
}

/// All surjections `γ ↠ n`, as value lists.
fn surjections(gamma: usize, n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if gamma == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let total = n.pow(gamma as u32);
    for code in 0..total {
        let mut f = Vec::with_capacity(gamma);
        let mut c = code;
        for _ in 0..gamma {
            f.push(c % n);
            c /= n;
        }
        let mut hit = vec![false; n];
        f.iter().for_each(|&v| hit[v] = true);
        if hit.iter().all(|&h| h) {
            out.push(f);
        }
    }
    out
}

/// All vectors of length `len` with entries in `0..=max`.
fn vectors(len: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

impl AxiomScheme {
    pub fn new(kind: SchemeKind, sort: Sort) -> AxiomScheme {
        AxiomScheme { kind, sort }
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn tag(&self) -> &'static str {
        self.kind.tag()
    }

    /// The sort of the instances' two sides.
    pub fn sort(&self) -> Sort {
        self.sort
    }

    pub fn instances(&self, locs: &Locations, bounds: Bounds) -> Vec<AxiomInstance> {
        use SchemeKind::*;
        let s = self.sort;
        let mut out: Vec<(String, Term, Term)> = Vec::new();
        let ls: Vec<Loc> = locs.locs().collect();
        let stores: Vec<Store> = locs.stores().collect();
        let bits = [false, true];
        let name = |l: Loc| locs.name(l).to_string();
        let render = |st: Store| locs.render(st);
        match self.kind {
            Associativity => {
                let (x, y, z) = (var("x", s), var("y", s), var("z", s));
                out.push((
                    String::new(),
                    or(x.clone(), or(y.clone(), z.clone())),
                    or(or(x, y), z),
                ));
            }
            Commutativity => {
                let (x, y) = (var("x", s), var("y", s));
                out.push((String::new(), or(x.clone(), y.clone()), or(y, x)));
            }
            Idempotency => {
                let x = var("x", s);
                out.push((String::new(), or(x.clone(), x.clone()), x));
            }
            Neutrality => {
                let x = var("x", s);
                out.push((String::new(), or(x.clone(), Term::bot(s)), x));
            }
            NdReturn => {
                let x = var("x0", s);
                out.push((String::new(), join(s, vec![x.clone()]), x));
            }
            NdSquash => {
                let b = bounds.squash_arity;
                for alpha in 0..=b {
                    for betas in vectors(alpha, b) {
                        let cells: Vec<(usize, usize)> = betas
                            .iter()
                            .enumerate()
                            .flat_map(|(i, &bi)| (0..bi).map(move |j| (i, j)))
                            .collect();
                        let x = |(i, j): (usize, usize)| var(&format!("x{i}_{j}"), s);
                        let lhs = join(
                            s,
                            betas
                                .iter()
                                .enumerate()
                                .map(|(i, &bi)| join(s, (0..bi).map(|j| x((i, j))).collect()))
                                .collect(),
                        );
                        for gamma in cells.len()..=b {
                            for f in surjections(gamma, cells.len()) {
                                let rhs = join(s, f.iter().map(|&k| x(cells[k])).collect());
                                out.push((
                                    format!("β={betas:?} f={f:?}"),
                                    lhs.clone(),
                                    rhs,
                                ));
                            }
                        }
                    }
                }
            }
            UL => {
                for &l in &ls {
                    for b in bits {
                        let xs = vars("x", 2, s);
                        let lhs = Term::update(l, b, Term::lookup(l, xs[0].clone(), xs[1].clone()).unwrap());
                        let rhs = Term::update(l, b, xs[b as usize].clone());
                        out.push((format!("ℓ={} b={}", name(l), b as u8), lhs, rhs));
                    }
                }
            }
            UU => {
                for &l in &ls {
                    for b in bits {
                        for b2 in bits {
                            let x = var("x", s);
                            let lhs = Term::update(l, b2, Term::update(l, b, x.clone()));
                            let rhs = Term::update(l, b, x);
                            out.push((format!("ℓ={} b={} b'={}", name(l), b as u8, b2 as u8), lhs, rhs));
                        }
                    }
                }
            }
            UUC => {
                for &l in &ls {
                    for &l2 in &ls {
                        if l == l2 {
                            continue;
                        }
                        for b in bits {
                            for b2 in bits {
                                let x = var("x", s);
                                let lhs = Term::update(l, b, Term::update(l2, b2, x.clone()));
                                let rhs = Term::update(l2, b2, Term::update(l, b, x));
                                out.push((
                                    format!("ℓ={} b={} ℓ'={} b'={}", name(l), b as u8, name(l2), b2 as u8),
                                    lhs,
                                    rhs,
                                ));
                            }
                        }
                    }
                }
            }
            LU => {
                for &l in &ls {
                    let x = var("x", s);
                    let lhs = Term::lookup(l, Term::update(l, false, x.clone()), Term::update(l, true, x.clone()))
                        .unwrap();
                    out.push((format!("ℓ={}", name(l)), lhs, x));
                }
            }
            NdU => {
                for &l in &ls {
                    for b in bits {
                        for a in 0..=bounds.max_join_arity {
                            let xs = vars("x", a, s);
                            let lhs = join(s, xs.iter().map(|x| Term::update(l, b, x.clone())).collect());
                            let rhs = Term::update(l, b, join(s, xs));
                            out.push((format!("ℓ={} b={} α={a}", name(l), b as u8), lhs, rhs));
                        }
                    }
                }
            }
            NdAcquire | NdRelease => {
                let (inner, wrap): (Sort, fn(Term) -> Term) = if self.kind == NdAcquire {
                    (Sort::Hold, |t| Term::acquire(t).unwrap())
                } else {
                    (Sort::Cede, |t| Term::release(t).unwrap())
                };
                for a in 0..=bounds.max_join_arity {
                    let xs = vars("x", a, inner);
                    let lhs = join(s, xs.iter().cloned().map(wrap).collect());
                    let rhs = wrap(join(inner, xs));
                    out.push((format!("α={a}"), lhs, rhs));
                }
            }
            Empty => {
                let y = var("y", Sort::Cede);
                let lhs = Term::acquire(Term::release(y.clone()).unwrap()).unwrap();
                out.push((String::new(), lhs, y));
            }
            Fuse => {
                let x = var("x", Sort::Hold);
                let l = Term::release(Term::acquire(x.clone()).unwrap()).unwrap();
                out.push((String::new(), l.clone(), or(l, x)));
            }
            NdB | NdT => {
                for &from in &stores {
                    for &to in &stores {
                        for a in 0..=bounds.max_join_arity {
                            let xs = vars("x", a, s);
                            let lhs = tr(from, to, join(s, xs.clone()));
                            let rhs = join(s, xs.into_iter().map(|x| tr(from, to, x)).collect());
                            out.push((format!("σ={} ρ={} α={a}", render(from), render(to)), lhs, rhs));
                        }
                    }
                }
            }
            M | SeqEq => {
                for &a in &stores {
                    for &b in &stores {
                        for &c in &stores {
                            let x = var("x", s);
                            let l = tr(a, b, tr(b, c, x.clone()));
                            let r = tr(a, c, x);
                            let (lhs, rhs) = if self.kind == M { (l.clone(), or(l, r)) } else { (l, r) };
                            out.push((format!("σ={} ρ={} θ={}", render(a), render(b), render(c)), lhs, rhs));
                        }
                    }
                }
            }
            S => {
                for &a in &stores {
                    let x = var("x", s);
                    let r = tr(a, a, x.clone());
                    out.push((format!("σ={}", render(a)), x.clone(), or(x, r)));
                }
            }
            H | HS => {
                let x = var("x", s);
                let all = join(s, stores.iter().map(|&a| tr(a, a, x.clone())).collect());
                if self.kind == H {
                    out.push((String::new(), all.clone(), or(all, x)));
                } else {
                    out.push((String::new(), x, all));
                }
            }
            SeqNe => {
                for &a in &stores {
                    for &b in &stores {
                        for &m in &stores {
                            if b == m {
                                continue;
                            }
                            for &c in &stores {
                                let x = var("x", s);
                                let lhs = tr(a, b, tr(m, c, x));
                                out.push((
                                    format!("σ={} ρ={} μ={} θ={}", render(a), render(b), render(m), render(c)),
                                    lhs,
                                    Term::bot(s),
                                ));
                            }
                        }
                    }
                }
            }
        }
        out.into_iter()
            .map(|(params, lhs, rhs)| AxiomInstance {
                scheme: self.tag(),
                params,
                relation: self.kind.relation(),
                ctx: ctx_of(&[&lhs, &rhs]),
                lhs,
                rhs,
            })
            .collect()
    }
}

impl fmt::Display for AxiomInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.scheme)?;
        if !self.params.is_empty() {
            write!(f, " [{}]", self.params)?;
        }
        Ok(())
    }
}
