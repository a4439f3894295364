//! Global symbol interner. Symbols are named indeterminates of the coefficient field.

use once_cell::sync::Lazy;
use parking_lot::RwLock;
use std::collections::HashMap;
use std::fmt;

#[derive(Default)]
struct Interner {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

static INTERNER: Lazy<RwLock<Interner>> = Lazy::new(|| RwLock::new(Interner::default()));

/// An interned indeterminate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub(crate) u32);

impl Symbol {
    pub fn new(name: &str) -> Symbol {
        if let Some(&id) = INTERNER.read().ids.get(name) {
            return Symbol(id);
        }
        let mut w = INTERNER.write();
        if let Some(&id) = w.ids.get(name) {
            return Symbol(id);
        }
        let id = w.names.len() as u32;
        w.names.push(name.to_string());
        w.ids.insert(name.to_string(), id);
        Symbol(id)
    }

    pub fn name(self) -> String {
        INTERNER.read().names[self.0 as usize].clone()
    }

    /// Compare by name, which is stable across processes (ids are not).
    pub fn cmp_name(self, other: Symbol) -> std::cmp::Ordering {
        if self == other {
            return std::cmp::Ordering::Equal;
        }
        let r = INTERNER.read();
        r.names[self.0 as usize].cmp(&r.names[other.0 as usize])
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}
