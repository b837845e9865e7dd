//! Interned identifiers.
//!
//! Every variable is a [`Name`]: an interned base string plus an optional
//! numeric suffix. Fresh names reuse the base and take the next suffix from a
//! [`Fresh`] counter, so generated names stay readable (`x` becomes `x3`) and
//! can be printed and parsed back without ambiguity.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

#[derive(Default)]
struct Interner {
    ids: HashMap<&'static str, u32>,
    strs: Vec<&'static str>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(Default::default)
}

/// An interned string. Used for name bases, constructor and type names.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Symbol(u32);

impl Symbol {
    pub fn intern(s: &str) -> Symbol {
        if let Some(&id) = interner().read().unwrap().ids.get(s) {
            return Symbol(id);
        }
        let mut table = interner().write().unwrap();
        if let Some(&id) = table.ids.get(s) {
            return Symbol(id);
        }
        // Symbols live for the whole process; the set of distinct bases is small.
        let leaked: &'static str = Box::leak(s.to_owned().into_boxed_str());
        let id = table.strs.len() as u32;
        table.strs.push(leaked);
        table.ids.insert(leaked, id);
        Symbol(id)
    }

    pub fn as_str(self) -> &'static str {
        interner().read().unwrap().strs[self.0 as usize]
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self.0 == other.0 {
            std::cmp::Ordering::Equal
        } else {
            self.as_str().cmp(other.as_str())
        }
    }
}

/// A term variable.
///
/// The printed form is `base` followed by the decimal suffix, if any. Parsing
/// splits a trailing canonical decimal off the identifier, so `x12` and the
/// generated name `x` + 12 are the same variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Name {
    base: Symbol,
    index: Option<u32>,
}

impl Name {
    pub fn new(s: &str) -> Name {
        let digits = s.len() - s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        if digits == 0 || digits == s.len() {
            return Name { base: Symbol::intern(s), index: None };
        }
        let run = &s[s.len() - digits..];
        let mut canonical = run.trim_start_matches('0');
        if canonical.is_empty() {
            canonical = "0";
        }
        match canonical.parse::<u32>() {
            Ok(index) => Name {
                base: Symbol::intern(&s[..s.len() - canonical.len()]),
                index: Some(index),
            },
            Err(_) => Name { base: Symbol::intern(s), index: None },
        }
    }

    pub fn base(self) -> Symbol {
        self.base
    }

    pub fn index(self) -> Option<u32> {
        self.index
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}{}", self.base, i),
            None => write!(f, "{}", self.base),
        }
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Name {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.base, self.index).cmp(&(other.base, other.index))
    }
}

/// Counter for fresh variables.
///
/// A generator created with [`Fresh::above`] never produces a name that
/// already occurs in the given term.
#[derive(Clone, Debug)]
pub struct Fresh {
    next: u32,
}

impl Fresh {
    pub fn starting_at(next: u32) -> Fresh {
        Fresh { next }
    }

    pub fn above(e: &super::Expr) -> Fresh {
        Fresh { next: e.max_name_index().map_or(0, |i| i + 1) }
    }

    /// Makes sure later names are also fresh for `e`.
    pub fn bump_above(&mut self, e: &super::Expr) {
        if let Some(i) = e.max_name_index() {
            self.next = self.next.max(i + 1);
        }
    }

    pub fn name(&mut self, like: Name) -> Name {
        let index = self.next;
        self.next += 1;
        Name { base: like.base, index: Some(index) }
    }

    pub fn peek(&self) -> u32 {
        self.next
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffix_split_round_trips() {
        for s in ["x", "x0", "x12", "x00", "x007", "f'", "_a1b", "y2", "long_name42"] {
            assert_eq!(Name::new(s).to_string(), s);
        }
        assert_eq!(Name::new("x12").index(), Some(12));
        assert_eq!(Name::new("x00").index(), Some(0));
        assert_eq!(Name::new("x00").base().as_str(), "x0");
    }

    #[test]
    fn overlong_suffix_stays_in_base() {
        let n = Name::new("x99999999999999");
        assert_eq!(n.index(), None);
        assert_eq!(n.to_string(), "x99999999999999");
    }
}
