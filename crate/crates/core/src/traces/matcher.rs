use smallvec::{smallvec, SmallVec};

use crate::store::Transition;
use crate::traces::trace::{Discipline, Trace};

type Reach = SmallVec<[u64; 2]>;

/// Decides membership in the closure of a single generator.
///
/// A candidate is in the closure exactly when the generator's transitions can
/// be cut into consecutive chaining blocks whose fusions appear in order in
/// the candidate, with every other candidate transition a stutter placed where
/// the end sorts allow one.
#[derive(Debug, Clone)]
pub struct Matcher {
    len: usize,
    // fused[i * (len + 1) + k]: the fusion of generator transitions i..k.
    fused: Vec<Option<Transition>>,
    front_open: bool,
    back_open: bool,
}

impl Matcher {
    pub fn new(gen: &[Transition], front_open: bool, back_open: bool) -> Matcher {
        let n = gen.len();
        let w = n + 1;
        let mut fused = vec![None; w * w];
        for i in 0..n {
            let mut acc = Some(gen[i]);
            fused[i * w + i + 1] = acc;
            for k in i + 1..n {
                acc = match acc {
                    Some(t) if t.to == gen[k].from => Some(Transition::new(t.from, gen[k].to)),
                    _ => None,
                };
                if acc.is_none() {
                    break;
                }
                fused[i * w + k + 1] = acc;
            }
        }
        Matcher {
            len: n,
            fused,
            front_open,
            back_open,
        }
    }

    /// A matcher for a trace generator under `discipline`.
    pub fn for_trace(gen: &Trace, discipline: Discipline) -> Matcher {
        let (front, back) = discipline.open_ends(gen.start(), gen.value_sort());
        Matcher::new(gen.steps(), front, back)
    }

    pub fn generator_len(&self) -> usize {
        self.len
    }

    /// Whether the transition sequence `cand` is derivable from the generator.
    pub fn matches(&self, cand: &[Transition]) -> bool {
        let n = self.len;
        let w = n + 1;
        let words = w.div_ceil(64);
        let mut reach: Reach = smallvec![0; words];
        let mut next: Reach = smallvec![0; words];
        reach[0] = 1;
        for &t in cand {
            next.iter_mut().for_each(|x| *x = 0);
            let mut any = false;
            for (wi, &word) in reach.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let i = wi * 64 + b;
                    if t.is_stutter() && (i != 0 || self.front_open) && (i != n || self.back_open) {
                        next[i / 64] |= 1 << (i % 64);
                        any = true;
                    }
                    for k in i + 1..=n {
                        match self.fused[i * w + k] {
                            Some(f) if f == t => {
                                next[k / 64] |= 1 << (k % 64);
                                any = true;
                            }
                            Some(_) => {}
                            None => break,
                        }
                    }
                }
            }
            if !any {
                return false;
            }
            std::mem::swap(&mut reach, &mut next);
        }
        reach[n / 64] & (1 << (n % 64)) != 0
    }

    /// Whether `cand` is in the closure of `gen`: same ends and derivable
    /// transitions.
    pub fn member(&self, gen: &Trace, cand: &Trace) -> bool {
        gen.start() == cand.start()
            && gen.value_sort() == cand.value_sort()
            && gen.value() == cand.value()
            && self.matches(cand.steps())
    }
}

/// Whether `cand` is in the closure of the single generator `gen`.
pub fn member_of(gen: &Trace, cand: &Trace, discipline: Discipline) -> bool {
    gen.start() == cand.start()
        && gen.value_sort() == cand.value_sort()
        && gen.value() == cand.value()
        && Matcher::for_trace(gen, discipline).matches(cand.steps())
}
