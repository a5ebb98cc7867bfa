use std::collections::BTreeMap;

use crate::kernel::{substitute, Op, Sort, Substitution, Term, TermKind};
use crate::presentations::{PresentationError, Theory};
use crate::store::Locations;
use crate::traces::open_transition;

/// How a translation maps operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranslationRule {
    /// Every operator to itself.
    Identity,
    /// Global state into the hold sort of shared state.
    Embed,
    /// Open transitions as global-state terms; also the identity on the
    /// delimiters and cede joins.
    OpenToState,
    /// Updates and lookups as joins of open transitions; also the identity
    /// on the delimiters and cede joins.
    StateToOpen,
    /// Brookes transitions as delimited open transitions.
    Delimit,
    /// First one, then the other.
    Composite(Box<Translation>, Box<Translation>),
}

/// An operator-to-term mapping between theories along a sort map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    name: String,
    source: Theory,
    target: Theory,
    sort_map: BTreeMap<Sort, Sort>,
    rule: TranslationRule,
    locs: Locations,
}

fn arg(i: usize, sort: Sort) -> Term {
    Term::var(format!("x{i}"), sort)
}

impl Translation {
    pub fn new(
        name: impl Into<String>,
        source: Theory,
        target: Theory,
        sort_map: BTreeMap<Sort, Sort>,
        rule: TranslationRule,
        locs: &Locations,
    ) -> Translation {
        Translation {
            name: name.into(),
            source,
            target,
            sort_map,
            rule,
            locs: locs.clone(),
        }
    }

    /// The identity translation of `theory`.
    pub fn identity(theory: Theory, locs: &Locations) -> Translation {
        let sort_map = theory.sorts().into_iter().map(|s| (s, s)).collect();
        Translation::new(
            format!("id_{theory}"),
            theory,
            theory,
            sort_map,
            TranslationRule::Identity,
            locs,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> Theory {
        self.source
    }

    pub fn target(&self) -> Theory {
        self.target
    }

    pub fn rule(&self) -> &TranslationRule {
        &self.rule
    }

    pub fn map_sort(&self, sort: Sort) -> Result<Sort, PresentationError> {
        self.sort_map
            .get(&sort)
            .copied()
            .ok_or(PresentationError::SortMismatch {
                expected: self.source.sorts()[0],
                found: sort,
            })
    }

    fn unknown(&self, op: &Op, sort: Sort) -> PresentationError {
        PresentationError::UnknownOperator {
            translation: self.name.clone(),
            op: format!("{} at sort {sort}", op.show(&self.locs)),
        }
    }

    /// The target term for `op` at result sort `sort`, over `x0, x1, …` of
    /// the mapped argument sorts.
    pub fn image(&self, op: &Op, sort: Sort) -> Result<Term, PresentationError> {
        let target_sort = self.map_sort(sort)?;
        let shape = op.shape(sort).ok_or_else(|| self.unknown(op, sort))?;
        let args: Vec<Term> = shape
            .iter()
            .enumerate()
            .map(|(i, &s)| Ok(arg(i, self.map_sort(s)?)))
            .collect::<Result<_, PresentationError>>()?;
        let same = || Term::app(*op, target_sort, args.clone()).map_err(PresentationError::from);
        let stores: Vec<_> = self.locs.stores().collect();
        match &self.rule {
            TranslationRule::Identity | TranslationRule::Embed => same(),
            TranslationRule::OpenToState => match op {
                Op::Transition(t) if sort == Sort::Hold => {
                    Ok(open_transition(&self.locs, t.from, t.to, args[0].clone()))
                }
                Op::Transition(_) | Op::Update { .. } | Op::Lookup { .. } => Err(self.unknown(op, sort)),
                _ => same(),
            },
            TranslationRule::StateToOpen => match *op {
                Op::Update { loc, bit } => Ok(Term::join(
                    target_sort,
                    stores
                        .iter()
                        .map(|&s| {
                            Term::transition(
                                crate::store::Transition::new(s, s.set(loc, bit)),
                                args[0].clone(),
                            )
                        })
                        .collect(),
                )?),
                Op::Lookup { loc } => Ok(Term::join(
                    target_sort,
                    stores
                        .iter()
                        .map(|&s| {
                            Term::transition(
                                crate::store::Transition::stutter(s),
                                args[s.get(loc) as usize].clone(),
                            )
                        })
                        .collect(),
                )?),
                Op::Transition(_) => Err(self.unknown(op, sort)),
                _ => same(),
            },
            TranslationRule::Delimit => match op {
                Op::Transition(t) => {
                    let inner = Term::release(args[0].clone())?;
                    Ok(Term::acquire(Term::transition(*t, inner))?)
                }
                Op::Join(_) => same(),
                _ => Err(self.unknown(op, sort)),
            },
            TranslationRule::Composite(first, second) => {
                apply_translation(second, &first.image(op, sort)?)
            }
        }
    }
}

/// Replaces every operator by its image; variables keep their names.
pub fn apply_translation(e: &Translation, t: &Term) -> Result<Term, PresentationError> {
    match t.kind() {
        TermKind::Var(n) => Ok(Term::var(n.clone(), e.map_sort(t.sort())?)),
        TermKind::App(op, args) => {
            let image = e.image(op, t.sort())?;
            let mut theta = Substitution::new();
            for (i, a) in args.iter().enumerate() {
                theta.insert(format!("x{i}"), apply_translation(e, a)?);
            }
            let out = substitute(&image, &theta).map_err(|err| match err {
                crate::kernel::KernelError::SortMismatch { expected, found, .. } => {
                    PresentationError::SortMismatch { expected, found }
                }
                other => other.into(),
            })?;
            let want = e.map_sort(t.sort())?;
            if out.sort() != want {
                return Err(PresentationError::SortMismatch {
                    expected: want,
                    found: out.sort(),
                });
            }
            Ok(out)
        }
    }
}

/// `second ∘ first`.
pub fn compose(first: &Translation, second: &Translation) -> Result<Translation, PresentationError> {
    if first.target != second.source {
        return Err(PresentationError::Mismatch {
            first_target: first.target,
            second_source: second.source,
        });
    }
    let sort_map = first
        .sort_map
        .iter()
        .map(|(&s, &m)| Ok((s, second.map_sort(m)?)))
        .collect::<Result<_, PresentationError>>()?;
    Ok(Translation::new(
        format!("{};{}", first.name, second.name),
        first.source,
        second.target,
        sort_map,
        TranslationRule::Composite(Box::new(first.clone()), Box::new(second.clone())),
        &first.locs,
    ))
}

/// `E`, `E_G`, `E_Tgs`, `E_Tr`, `E_TrS`, `E_STr` and `E_BS`.
pub fn builtin_translations(locs: &Locations) -> Vec<Translation> {
    use Sort::*;
    let hold = BTreeMap::from([(Hold, Hold)]);
    let two = BTreeMap::from([(Hold, Hold), (Cede, Cede)]);
    let e = Translation::new("E", Theory::G, Theory::S, hold.clone(), TranslationRule::Embed, locs);
    let e_g = Translation::new("E_G", Theory::Tgs, Theory::G, hold.clone(), TranslationRule::OpenToState, locs);
    let e_tgs = Translation::new("E_Tgs", Theory::G, Theory::Tgs, hold, TranslationRule::StateToOpen, locs);
    let e_tr = Translation::new(
        "E_Tr",
        Theory::B,
        Theory::Tr,
        BTreeMap::from([(Star, Cede)]),
        TranslationRule::Delimit,
        locs,
    );
    let e_trs = Translation::new("E_TrS", Theory::Tr, Theory::S, two.clone(), TranslationRule::OpenToState, locs);
    let e_str = Translation::new("E_STr", Theory::S, Theory::Tr, two, TranslationRule::StateToOpen, locs);
    let mut e_bs = compose(&e_tr, &e_trs).expect("E_Tr targets Tr");
    e_bs.name = "E_BS".to_string();
    vec![e, e_g, e_tgs, e_tr, e_trs, e_str, e_bs]
}

/// A translation from `from` to `to`, chaining built-ins if needed.
pub fn find_translation(
    locs: &Locations,
    from: Theory,
    to: Theory,
) -> Option<Translation> {
    if from == to {
        return Some(Translation::identity(from, locs));
    }
    let all = builtin_translations(locs);
    let mut paths: Vec<(Theory, Translation)> = all
        .iter()
        .filter(|t| t.source == from)
        .map(|t| (t.target, t.clone()))
        .collect();
    let mut seen = vec![from];
    // Breadth-first over the catalogue, preferring direct entries.
    while !paths.is_empty() {
        if let Some((_, t)) = paths.iter().find(|(th, _)| *th == to) {
            return Some(t.clone());
        }
        let mut next = Vec::new();
        for (th, t) in paths {
            if seen.contains(&th) {
                continue;
            }
            seen.push(th);
            for step in all.iter().filter(|s| s.source == th) {
                next.push((step.target, compose(&t, step).ok()?));
            }
        }
        paths = next;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::{Loc, Transition};

    fn by_name(locs: &Locations, n: &str) -> Translation {
        builtin_translations(locs).into_iter().find(|t| t.name() == n).unwrap()
    }

    #[test]
    fn catalogue_examples() {
        let locs = Locations::default();
        let st = |s: &str| locs.parse_store(s).unwrap();
        let t = Transition::new(st("11"), st("10"));

        let x = Term::var("x", Sort::Star);
        let e_tr = by_name(&locs, "E_Tr");
        let image = apply_translation(&e_tr, &Term::transition(t, x.clone())).unwrap();
        assert_eq!(image.show(&locs).to_string(), "◁⟨11,10⟩▷x");

        let e_bs = by_name(&locs, "E_BS");
        let image = apply_translation(&e_bs, &Term::transition(t, x)).unwrap();
        assert_eq!(
            image.show(&locs).to_string(),
            "◁L_x(⊥, L_y(⊥, U_{x,1}U_{y,0}▷x))"
        );

        let e = by_name(&locs, "E");
        let u = Term::update(Loc(1), false, Term::var("x", Sort::Hold));
        assert_eq!(apply_translation(&e, &u).unwrap(), u);

        let e_tgs = by_name(&locs, "E_Tgs");
        let l = Term::lookup(Loc(1), Term::var("x0", Sort::Hold), Term::var("x1", Sort::Hold)).unwrap();
        let image = apply_translation(&e_tgs, &l).unwrap();
        assert_eq!(
            image.show(&locs).to_string(),
            "⋁(⟨00,00⟩x0, ⟨01,01⟩x1, ⟨10,10⟩x0, ⟨11,11⟩x1)"
        );

        let e_g = by_name(&locs, "E_G");
        let image = e_g.image(&Op::Transition(t), Sort::Hold).unwrap();
        assert_eq!(image, open_transition(&locs, t.from, t.to, Term::var("x0", Sort::Hold)));

        let e_str = by_name(&locs, "E_STr");
        let image = e_str.image(&Op::Acquire, Sort::Cede).unwrap();
        assert_eq!(image, Term::acquire(Term::var("x0", Sort::Hold)).unwrap());
    }

    #[test]
    fn composition() {
        let locs = Locations::default();
        let e = by_name(&locs, "E");
        let id = Translation::identity(Theory::S, &locs);
        let both = compose(&e, &id).unwrap();
        let u = Term::update(Loc(0), true, Term::var("x", Sort::Hold));
        assert_eq!(apply_translation(&both, &u).unwrap(), apply_translation(&e, &u).unwrap());
        assert!(matches!(compose(&id, &e), Err(PresentationError::Mismatch { .. })));
        let e_g = by_name(&locs, "E_G");
        assert!(apply_translation(&e_g, &u).is_err());
    }

    #[test]
    fn path_search() {
        let locs = Locations::default();
        let t = find_translation(&locs, Theory::B, Theory::S).unwrap();
        assert_eq!(t.name(), "E_BS");
        let t = find_translation(&locs, Theory::Tgs, Theory::S).unwrap();
        assert_eq!(t.target(), Theory::S);
        assert!(find_translation(&locs, Theory::S, Theory::B).is_none());
    }
}
