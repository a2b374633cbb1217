use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::term::{Arith, Rational, Term, Unit};
use super::LogicError;

/// Conversion table from unit names (and their surface aliases) to base units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitTable {
    /// canonical unit -> (dimension, factor relative to the dimension's base unit)
    units: BTreeMap<String, (String, Rational)>,
    /// surface form -> canonical unit
    aliases: BTreeMap<String, String>,
    /// dimension -> base unit
    bases: BTreeMap<String, String>,
}

impl Default for UnitTable {
    fn default() -> Self {
        let mut t = UnitTable::empty();
        t.add("mm", "length", Rational::one(), &["millimeter", "millimeters", "millimetre", "millimetres"]);
        t.add("cm", "length", Rational::from_integer(10.into()), &["centimeter", "centimeters", "centimetre", "centimetres"]);
        t.add("m", "length", Rational::from_integer(1000.into()), &["meter", "meters", "metre", "metres"]);
        // 1 in = 25.4 mm, 1 ft = 12 in
        t.add("inch", "length", Rational::new(127.into(), 5.into()), &["inches", "in"]);
        t.add("foot", "length", Rational::new(1524.into(), 5.into()), &["feet", "ft"]);
        t
    }
}

impl UnitTable {
    pub fn empty() -> Self {
        UnitTable {
            units: BTreeMap::new(),
            aliases: BTreeMap::new(),
            bases: BTreeMap::new(),
        }
    }

    /// Registers a unit; a factor of one makes it the base unit of its dimension.
    pub fn add(&mut self, name: &str, dimension: &str, factor: Rational, aliases: &[&str]) {
        if factor.is_one() {
            self.bases.insert(dimension.to_string(), name.to_string());
        }
        self.units
            .insert(name.to_string(), (dimension.to_string(), factor));
        self.aliases.insert(name.to_string(), name.to_string());
        for a in aliases {
            self.aliases.insert(a.to_string(), name.to_string());
        }
    }

    pub fn lookup(&self, surface: &str) -> Option<Unit> {
        let name = self.aliases.get(surface)?;
        let (dim, _) = &self.units[name];
        Some(Unit::new(name, dim))
    }

    pub fn factor(&self, unit: &str) -> Result<(&str, &Rational), LogicError> {
        let canonical = self
            .aliases
            .get(unit)
            .ok_or_else(|| LogicError::UnknownUnit(unit.to_string()))?;
        let (dim, f) = &self.units[canonical];
        Ok((dim, f))
    }

    pub fn base_unit(&self, dimension: &str) -> Option<Unit> {
        self.bases.get(dimension).map(|b| Unit::new(b, dimension))
    }

    pub fn units(&self) -> impl Iterator<Item = (&String, &(String, Rational))> {
        self.units.iter()
    }

    fn to_base(&self, value: &Rational, unit: &Unit) -> Result<(Rational, Unit), LogicError> {
        let (dim, f) = self.factor(&unit.name)?;
        if dim != unit.dimension {
            return Err(LogicError::MixedDimension(dim.to_string(), unit.dimension.clone()));
        }
        let base = self
            .base_unit(dim)
            .ok_or_else(|| LogicError::UnknownUnit(format!("base unit of {dim}")))?;
        Ok((value * f, base))
    }
}

/// Dimension carried by a normalized arithmetic term, if it can be read off syntactically.
fn dimension_of(t: &Term) -> Option<String> {
    match t {
        Term::Arith(Arith::Rat { unit: Some(u), .. }) => Some(u.dimension.clone()),
        Term::Arith(Arith::Scaled { unit, .. }) => Some(unit.dimension.clone()),
        Term::Arith(Arith::Int(_)) => Some("count".into()),
        Term::Arith(Arith::Sum(a, b) | Arith::Diff(a, b)) => dimension_of(a).or_else(|| dimension_of(b)),
        _ => None,
    }
}

/// Rewrites every measure literal inside `t` into its dimension's base unit.
pub fn normalize_units(t: &Term, table: &UnitTable) -> Result<Term, LogicError> {
    match t {
        Term::Arith(Arith::Rat {
            value,
            unit: Some(u),
        }) => {
            let (v, base) = table.to_base(value, u)?;
            Ok(Term::Arith(Arith::Rat {
                value: v,
                unit: Some(base),
            }))
        }
        Term::Arith(Arith::Scaled { amount, unit }) => {
            let amount = normalize_units(amount, table)?;
            match &amount {
                Term::Arith(Arith::Int(n)) => {
                    let (v, base) = table.to_base(&Rational::from_integer(n.clone()), unit)?;
                    Ok(Term::Arith(Arith::Rat {
                        value: v,
                        unit: Some(base),
                    }))
                }
                _ => {
                    table.factor(&unit.name)?;
                    Ok(Term::Arith(Arith::Scaled {
                        amount: Box::new(amount),
                        unit: unit.clone(),
                    }))
                }
            }
        }
        Term::Arith(Arith::Sum(a, b) | Arith::Diff(a, b)) => {
            let na = normalize_units(a, table)?;
            let nb = normalize_units(b, table)?;
            if let (Some(da), Some(db)) = (dimension_of(&na), dimension_of(&nb)) {
                if da != db {
                    return Err(LogicError::MixedDimension(da, db));
                }
            }
            let (x, y) = (Box::new(na), Box::new(nb));
            Ok(Term::Arith(match t {
                Term::Arith(Arith::Sum(..)) => Arith::Sum(x, y),
                _ => Arith::Diff(x, y),
            }))
        }
        Term::Cmp(r, a, b) => {
            let na = normalize_units(a, table)?;
            let nb = normalize_units(b, table)?;
            if let (Some(da), Some(db)) = (dimension_of(&na), dimension_of(&nb)) {
                if da != db {
                    return Err(LogicError::MixedDimension(da, db));
                }
            }
            Ok(Term::Cmp(*r, Box::new(na), Box::new(nb)))
        }
        _ => {
            let mut err = None;
            let out = t.map_children(&mut |c| match normalize_units(c, table) {
                Ok(x) => x,
                Err(e) => {
                    err.get_or_insert(e);
                    c.clone()
                }
            });
            match err {
                Some(e) => Err(e),
                None => Ok(out),
            }
        }
    }
}

/// Folds `Sum`/`Diff` of two literals of the same kind into one literal.
pub fn fold_constants(t: &Term) -> Term {
    let t = t.map_children(&mut fold_constants);
    match &t {
        Term::Arith(Arith::Sum(a, b) | Arith::Diff(a, b)) => {
            let plus = matches!(t, Term::Arith(Arith::Sum(..)));
            match (&**a, &**b) {
                (Term::Arith(Arith::Int(x)), Term::Arith(Arith::Int(y))) => {
                    let v: BigInt = if plus { x + y } else { x - y };
                    Term::Arith(Arith::Int(v))
                }
                (
                    Term::Arith(Arith::Rat { value: x, unit: ux }),
                    Term::Arith(Arith::Rat { value: y, unit: uy }),
                ) if ux == uy => Term::Arith(Arith::Rat {
                    value: if plus { x + y } else { x - y },
                    unit: ux.clone(),
                }),
                (_, Term::Arith(Arith::Int(y))) if y.is_zero() => (**a).clone(),
                _ => t.clone(),
            }
        }
        _ => t,
    }
}
