use std::collections::HashMap;

use super::name::Symbol;
use super::SyntaxError;

/// Constructors of one type constructor, with their arities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataDecl {
    pub tycon: Symbol,
    pub constructors: Vec<(Symbol, usize)>,
}

impl DataDecl {
    pub fn new(tycon: &str, constructors: &[(&str, usize)]) -> DataDecl {
        DataDecl {
            tycon: Symbol::intern(tycon),
            constructors: constructors.iter().map(|(c, a)| (Symbol::intern(c), *a)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ConInfo {
    pub tycon: Symbol,
    /// Position in the declaration.
    pub tag: usize,
    pub arity: usize,
}

/// The set of declared data types.
#[derive(Clone, Debug, Default)]
pub struct DataEnv {
    decls: Vec<DataDecl>,
    cons: HashMap<Symbol, ConInfo>,
}

impl DataEnv {
    pub fn empty() -> DataEnv {
        DataEnv::default()
    }

    /// `Bool`, `List` and `Nat`.
    pub fn prelude() -> DataEnv {
        let mut env = DataEnv::empty();
        for d in [
            DataDecl::new("Bool", &[("True", 0), ("False", 0)]),
            DataDecl::new("List", &[("Nil", 0), ("Cons", 2)]),
            DataDecl::new("Nat", &[("Zero", 0), ("Succ", 1)]),
        ] {
            env.add(d).expect("prelude declarations are consistent");
        }
        env
    }

    pub fn add(&mut self, decl: DataDecl) -> Result<(), SyntaxError> {
        if self.decls.iter().any(|d| d.tycon == decl.tycon) {
            return Err(SyntaxError::DuplicateDeclaration(decl.tycon.to_string()));
        }
        for (i, (c, arity)) in decl.constructors.iter().enumerate() {
            if self.cons.contains_key(c) || decl.constructors[..i].iter().any(|(d, _)| d == c) {
                return Err(SyntaxError::DuplicateDeclaration(c.to_string()));
            }
            self.cons.insert(*c, ConInfo { tycon: decl.tycon, tag: i, arity: *arity });
        }
        self.decls.push(decl);
        Ok(())
    }

    pub fn con(&self, c: Symbol) -> Option<ConInfo> {
        self.cons.get(&c).copied()
    }

    pub fn arity(&self, c: Symbol) -> Option<usize> {
        self.con(c).map(|i| i.arity)
    }

    pub fn decl(&self, tycon: Symbol) -> Option<&DataDecl> {
        self.decls.iter().find(|d| d.tycon == tycon)
    }

    pub fn decls(&self) -> &[DataDecl] {
        &self.decls
    }
}
