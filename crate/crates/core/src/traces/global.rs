use std::collections::BTreeSet;

use crate::kernel::{Algebra, KernelError, Name, NodePath, Op, Sort};
use crate::store::{Locations, Store};
use crate::traces::TraceError;

/// A nondeterministic state function: for each initial store, the possible
/// (value, final store) outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GTable {
    // Indexed by the store's bit pattern.
    rows: Vec<BTreeSet<(Name, Store)>>,
}

impl GTable {
    pub fn empty(locs: &Locations) -> GTable {
        GTable {
            rows: vec![BTreeSet::new(); locs.store_count()],
        }
    }

    /// `λσ. {(x, σ)}`.
    pub fn unit(locs: &Locations, x: &Name) -> GTable {
        let mut t = GTable::empty(locs);
        for s in locs.stores() {
            t.rows[s.0 as usize].insert((x.clone(), s));
        }
        t
    }

    /// A table from one row per store, in bit-pattern order.
    pub fn from_rows(rows: Vec<BTreeSet<(Name, Store)>>) -> GTable {
        GTable { rows }
    }

    pub fn row(&self, sigma: Store) -> &BTreeSet<(Name, Store)> {
        &self.rows[sigma.0 as usize]
    }

    pub fn rows(&self) -> impl Iterator<Item = (Store, &BTreeSet<(Name, Store)>)> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| (Store(i as u16), r))
    }

    pub fn subset(&self, other: &GTable) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }
}

/// The free model of nondeterministic global state, also interpreting plain
/// transitions `⟨σ,ρ⟩` as "the store is `σ`; make it `ρ`".
#[derive(Debug, Clone, Default)]
pub struct StateModel {
    locs: Locations,
}

impl StateModel {
    pub fn new(locs: Locations) -> StateModel {
        StateModel { locs }
    }

    pub fn locations(&self) -> &Locations {
        &self.locs
    }

    pub fn unit(&self, x: &Name) -> GTable {
        GTable::unit(&self.locs, x)
    }
}

impl Algebra for StateModel {
    type Carrier = GTable;
    type Error = TraceError;

    fn operate(&self, op: &Op, sort: Sort, args: Vec<GTable>) -> Result<GTable, TraceError> {
        if sort != Sort::Hold {
            return Err(TraceError::SortMismatch {
                expected: Sort::Hold,
                found: sort,
            });
        }
        let mut out = GTable::empty(&self.locs);
        for sigma in self.locs.stores() {
            let i = sigma.0 as usize;
            out.rows[i] = match *op {
                Op::Join(_) => args.iter().flat_map(|a| a.rows[i].iter().cloned()).collect(),
                Op::Update { loc, bit } => args[0].row(sigma.set(loc, bit)).clone(),
                Op::Lookup { loc } => args[sigma.get(loc) as usize].rows[i].clone(),
                Op::Transition(t) if t.from == sigma => args[0].row(t.to).clone(),
                Op::Transition(_) => BTreeSet::new(),
                _ => {
                    return Err(KernelError::UnknownOperator {
                        op: format!("{op:?} at sort {sort}"),
                        path: NodePath::default(),
                    }
                    .into())
                }
            };
        }
        Ok(out)
    }
}
