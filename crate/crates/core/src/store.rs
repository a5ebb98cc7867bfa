//! Memory stores over a finite, ordered set of one-bit locations.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Largest location count the store encoding supports.
pub const MAX_LOCATIONS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoreError {
    #[error("a store needs between 1 and {MAX_LOCATIONS} locations, got {0}")]
    LocationCount(usize),
    #[error("duplicate location name `{0}`")]
    DuplicateLocation(String),
    #[error("unknown location `{0}`")]
    UnknownLocation(String),
    #[error("`{text}` is not a store over {width} locations")]
    BadStore { text: String, width: usize },
    #[error("`{0}` is not a bit")]
    BadBit(String),
}

/// Index of a location in a [`Locations`] list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Loc(pub u8);

impl Loc {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The ordered location list every store is total over.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Locations {
    names: Vec<String>,
}

impl Default for Locations {
    fn default() -> Self {
        Locations {
            names: vec!["x".to_string(), "y".to_string()],
        }
    }
}

impl Locations {
    pub fn new<I, S>(names: I) -> Result<Self, StoreError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() || names.len() > MAX_LOCATIONS {
            return Err(StoreError::LocationCount(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(StoreError::DuplicateLocation(n.clone()));
            }
        }
        Ok(Locations { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, loc: Loc) -> &str {
        &self.names[loc.index()]
    }

    pub fn locs(&self) -> impl Iterator<Item = Loc> + Clone {
        (0..self.names.len() as u8).map(Loc)
    }

    pub fn lookup(&self, name: &str) -> Result<Loc, StoreError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Loc(i as u8))
            .ok_or_else(|| StoreError::UnknownLocation(name.to_string()))
    }

    /// Number of stores, `2^|locations|`.
    pub fn store_count(&self) -> usize {
        1 << self.names.len()
    }

    /// All stores, in rendering order (`00`, `01`, `10`, `11` for two locations).
    pub fn stores(&self) -> impl Iterator<Item = Store> + Clone {
        let n = self.names.len();
        (0..1u16 << n).map(move |code| {
            // Location 0 is the most significant digit of the rendering.
            let mut bits = 0u16;
            for i in 0..n {
                if code & (1 << (n - 1 - i)) != 0 {
                    bits |= 1 << i;
                }
            }
            Store(bits)
        })
    }

    pub fn contains(&self, store: Store) -> bool {
        store.0 >> self.names.len() == 0
    }

    pub fn render(&self, store: Store) -> String {
        (0..self.names.len())
            .map(|i| if store.0 & (1 << i) != 0 { '1' } else { '0' })
            .collect()
    }

    pub fn parse_store(&self, text: &str) -> Result<Store, StoreError> {
        let bad = || StoreError::BadStore {
            text: text.to_string(),
            width: self.names.len(),
        };
        if text.chars().count() != self.names.len() {
            return Err(bad());
        }
        let mut bits = 0u16;
        for (i, c) in text.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(bad()),
            }
        }
        Ok(Store(bits))
    }

    pub fn parse_bit(text: &str) -> Result<bool, StoreError> {
        match text {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(StoreError::BadBit(text.to_string())),
        }
    }
}

/// A total assignment of bits to locations; bit `i` holds location `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Store(pub u16);

impl Store {
    pub fn get(self, loc: Loc) -> bool {
        self.0 & (1 << loc.0) != 0
    }

    pub fn set(self, loc: Loc, bit: bool) -> Store {
        if bit {
            Store(self.0 | (1 << loc.0))
        } else {
            Store(self.0 & !(1 << loc.0))
        }
    }

    /// Number of locations on which two stores differ.
    pub fn distance(self, other: Store) -> u32 {
        (self.0 ^ other.0).count_ones()
    }
}

impl Ord for Store {
    // Matches the lexicographic order of the rendering.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.reverse_bits().cmp(&other.0.reverse_bits())
    }
}

impl PartialOrd for Store {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A state transition `⟨from, to⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Transition {
    pub from: Store,
    pub to: Store,
}

impl Transition {
    pub fn new(from: Store, to: Store) -> Self {
        Transition { from, to }
    }

    pub fn stutter(at: Store) -> Self {
        Transition { from: at, to: at }
    }

    pub fn is_stutter(self) -> bool {
        self.from == self.to
    }

    /// Number of locations this transition changes.
    pub fn changed_cells(self) -> u32 {
        self.from.distance(self.to)
    }
}

/// Renders a transition as `(σ,ρ)` with bitstring stores.
pub struct ShowTransition<'a>(pub &'a Locations, pub Transition);

impl fmt::Display for ShowTransition<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0.render(self.1.from), self.0.render(self.1.to))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering_follows_location_order() {
        let locs = Locations::default();
        let x = locs.lookup("x").unwrap();
        let s = Store::default().set(x, true);
        assert_eq!(locs.render(s), "10");
        assert_eq!(locs.parse_store("10").unwrap(), s);
        let order: Vec<String> = locs.stores().map(|s| locs.render(s)).collect();
        assert_eq!(order, ["00", "01", "10", "11"]);
        let mut sorted: Vec<Store> = locs.stores().collect();
        sorted.sort();
        assert_eq!(sorted, locs.stores().collect::<Vec<_>>());
    }

    #[test]
    fn rejects_bad_configurations() {
        assert!(Locations::new(Vec::<String>::new()).is_err());
        assert!(Locations::new(["a", "a"]).is_err());
        let locs = Locations::default();
        assert!(locs.parse_store("1").is_err());
        assert!(locs.parse_store("12").is_err());
        assert!(locs.lookup("z").is_err());
    }
}
