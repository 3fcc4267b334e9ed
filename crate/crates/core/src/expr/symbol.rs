use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// The role a symbol plays. Derived ordering fixes the canonical order of
/// factors inside a monomial: parameters, then `s`, then coordinates,
/// velocities, accelerations and finally ansatz coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Param,
    Curve,
    Coord(u16),
    Velocity(u16),
    Accel(u16),
    Ansatz(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    kind: SymbolKind,
    name: Arc<str>,
}

impl Symbol {
    fn new(kind: SymbolKind, name: &str) -> Self {
        Symbol {
            kind,
            name: Arc::from(name),
        }
    }

    /// Unknown coefficient `c<index>` of a finite ansatz.
    pub fn ansatz(index: u32) -> Self {
        Symbol::new(SymbolKind::Ansatz(index), &format!("c{index}"))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn is_velocity(&self) -> bool {
        matches!(self.kind, SymbolKind::Velocity(_))
    }

    pub fn is_ansatz(&self) -> bool {
        matches!(self.kind, SymbolKind::Ansatz(_))
    }

    pub fn is_param(&self) -> bool {
        matches!(self.kind, SymbolKind::Param)
    }

    /// Coordinate index for coordinates, velocities and accelerations.
    pub fn coord_index(&self) -> Option<usize> {
        match self.kind {
            SymbolKind::Coord(i) | SymbolKind::Velocity(i) | SymbolKind::Accel(i) => {
                Some(i as usize)
            }
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolError {
    #[error("duplicate symbol name `{0}`")]
    Duplicate(String),
    #[error("`{0}` is reserved")]
    Reserved(String),
    #[error("invalid identifier `{0}`")]
    Invalid(String),
}

pub(crate) const FUNCTION_NAMES: [&str; 8] =
    ["sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log"];

/// The symbols of one problem: the curve parameter `s`, the coordinates with
/// their velocity (`<q>dot`) and acceleration (`<q>ddot`) companions, and any
/// constant parameters.
#[derive(Clone, Debug)]
pub struct SymbolTable {
    s: Symbol,
    coords: Vec<Symbol>,
    velocities: Vec<Symbol>,
    accels: Vec<Symbol>,
    params: Vec<Symbol>,
    by_name: HashMap<String, Symbol>,
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl SymbolTable {
    pub fn new<S: AsRef<str>, P: AsRef<str>>(
        coords: &[S],
        params: &[P],
    ) -> Result<Self, SymbolError> {
        let s = Symbol::new(SymbolKind::Curve, "s");
        let mut table = SymbolTable {
            s: s.clone(),
            coords: Vec::new(),
            velocities: Vec::new(),
            accels: Vec::new(),
            params: Vec::new(),
            by_name: HashMap::new(),
        };
        table.by_name.insert("s".into(), s);
        for (i, c) in coords.iter().enumerate() {
            let name = c.as_ref();
            table.check_new(name)?;
            let coord = Symbol::new(SymbolKind::Coord(i as u16), name);
            let vel = Symbol::new(SymbolKind::Velocity(i as u16), &format!("{name}dot"));
            let acc = Symbol::new(SymbolKind::Accel(i as u16), &format!("{name}ddot"));
            for sym in [&coord, &vel, &acc] {
                if table.by_name.contains_key(sym.name()) {
                    return Err(SymbolError::Duplicate(sym.name().to_string()));
                }
                table.by_name.insert(sym.name().to_string(), sym.clone());
            }
            table.coords.push(coord);
            table.velocities.push(vel);
            table.accels.push(acc);
        }
        for p in params {
            let name = p.as_ref();
            table.check_new(name)?;
            let sym = Symbol::new(SymbolKind::Param, name);
            table.by_name.insert(name.to_string(), sym.clone());
            table.params.push(sym);
        }
        Ok(table)
    }

    fn check_new(&self, name: &str) -> Result<(), SymbolError> {
        if !valid_identifier(name) {
            return Err(SymbolError::Invalid(name.to_string()));
        }
        if FUNCTION_NAMES.contains(&name) {
            return Err(SymbolError::Reserved(name.to_string()));
        }
        if self.by_name.contains_key(name) {
            return Err(SymbolError::Duplicate(name.to_string()));
        }
        Ok(())
    }

    pub fn s(&self) -> &Symbol {
        &self.s
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Symbol] {
        &self.coords
    }

    pub fn velocities(&self) -> &[Symbol] {
        &self.velocities
    }

    pub fn accels(&self) -> &[Symbol] {
        &self.accels
    }

    pub fn params(&self) -> &[Symbol] {
        &self.params
    }

    pub fn coord(&self, i: usize) -> &Symbol {
        &self.coords[i]
    }

    pub fn velocity(&self, i: usize) -> &Symbol {
        &self.velocities[i]
    }

    pub fn lookup(&self, name: &str) -> Option<&Symbol> {
        self.by_name.get(name)
    }

    pub fn coord_position(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.name() == name)
    }
}
