use std::fmt;
use std::str::FromStr;

use super::GrammarError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    S,
    NP,
    N,
    PP,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Fwd,
    Bwd,
}

/// Closed feature inventory.
pub const FEATURES: &[&str] = &["dcl", "adj", "pos", "eqt", "dgr", "pt", "num", "msr"];

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Atom { base: Base, feature: Option<String> },
    Slash {
        result: Box<Category>,
        dir: Dir,
        arg: Box<Category>,
    },
}

impl Category {
    pub fn atom(base: Base, feature: Option<&str>) -> Self {
        Category::Atom {
            base,
            feature: feature.map(str::to_string),
        }
    }

    pub fn slash(result: Category, dir: Dir, arg: Category) -> Self {
        Category::Slash {
            result: Box::new(result),
            dir,
            arg: Box::new(arg),
        }
    }

    pub fn fwd(result: Category, arg: Category) -> Self {
        Self::slash(result, Dir::Fwd, arg)
    }

    pub fn bwd(result: Category, arg: Category) -> Self {
        Self::slash(result, Dir::Bwd, arg)
    }

    /// Structural match where a featureless atom matches any feature on the same base.
    pub fn unifies(&self, other: &Category) -> bool {
        match (self, other) {
            (Category::Atom { base: b1, feature: f1 }, Category::Atom { base: b2, feature: f2 }) => {
                b1 == b2 && (f1.is_none() || f2.is_none() || f1 == f2)
            }
            (
                Category::Slash { result: r1, dir: d1, arg: a1 },
                Category::Slash { result: r2, dir: d2, arg: a2 },
            ) => d1 == d2 && r1.unifies(r2) && a1.unifies(a2),
            _ => false,
        }
    }

    /// Directional match: a featureless atom in `self` accepts any feature in `actual`,
    /// a featured atom requires the same feature.
    pub fn accepts(&self, actual: &Category) -> bool {
        match (self, actual) {
            (Category::Atom { base: b1, feature: f1 }, Category::Atom { base: b2, feature: f2 }) => {
                b1 == b2 && (f1.is_none() || f1 == f2)
            }
            (
                Category::Slash { result: r1, dir: d1, arg: a1 },
                Category::Slash { result: r2, dir: d2, arg: a2 },
            ) => d1 == d2 && r1.accepts(r2) && a1.accepts(a2),
            _ => false,
        }
    }

    /// `X/Y` applied to something matching `Y` on its right.
    pub fn forward_apply(&self, arg: &Category) -> Option<Category> {
        match self {
            Category::Slash {
                result,
                dir: Dir::Fwd,
                arg: a,
            } if a.accepts(arg) => Some((**result).clone()),
            _ => None,
        }
    }

    /// `X\Y` applied to something matching `Y` on its left.
    pub fn backward_apply(&self, arg: &Category) -> Option<Category> {
        match self {
            Category::Slash {
                result,
                dir: Dir::Bwd,
                arg: a,
            } if a.accepts(arg) => Some((**result).clone()),
            _ => None,
        }
    }

    /// `X/Y  Y/Z => X/Z`
    pub fn forward_compose(left: &Category, right: &Category) -> Option<Category> {
        match (left, right) {
            (
                Category::Slash { result: x, dir: Dir::Fwd, arg: y },
                Category::Slash { result: y2, dir: Dir::Fwd, arg: z },
            ) if y.accepts(y2) => Some(Category::fwd((**x).clone(), (**z).clone())),
            _ => None,
        }
    }

    /// `Y\Z  X\Y => X\Z`
    pub fn backward_compose(left: &Category, right: &Category) -> Option<Category> {
        match (left, right) {
            (
                Category::Slash { result: y2, dir: Dir::Bwd, arg: z },
                Category::Slash { result: x, dir: Dir::Bwd, arg: y },
            ) if y.accepts(y2) => Some(Category::bwd((**x).clone(), (**z).clone())),
            _ => None,
        }
    }

    pub fn is_atom(&self, base: Base) -> bool {
        matches!(self, Category::Atom { base: b, .. } if *b == base)
    }

    pub fn feature(&self) -> Option<&str> {
        match self {
            Category::Atom { feature, .. } => feature.as_deref(),
            _ => None,
        }
    }

    /// Same shape with every feature removed.
    pub fn strip_features(&self) -> Category {
        match self {
            Category::Atom { base, .. } => Category::Atom {
                base: *base,
                feature: None,
            },
            Category::Slash { result, dir, arg } => {
                Category::slash(result.strip_features(), *dir, arg.strip_features())
            }
        }
    }

    fn fmt_inner(&self, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
        match self {
            Category::Atom { base, feature } => {
                let b = match base {
                    Base::S => "S",
                    Base::NP => "NP",
                    Base::N => "N",
                    Base::PP => "PP",
                };
                write!(f, "{b}")?;
                if let Some(ft) = feature {
                    write!(f, "[{ft}]")?;
                }
                Ok(())
            }
            Category::Slash { result, dir, arg } => {
                if nested {
                    write!(f, "(")?;
                }
                result.fmt_inner(f, true)?;
                write!(f, "{}", if *dir == Dir::Fwd { "/" } else { "\\" })?;
                arg.fmt_inner(f, true)?;
                if nested {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_inner(f, false)
    }
}

impl FromStr for Category {
    type Err = GrammarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let c = parse_slashes(&chars, &mut pos, s)?;
        if pos != chars.len() {
            return Err(GrammarError::BadCategory(s.to_string()));
        }
        Ok(c)
    }
}

fn parse_slashes(cs: &[char], pos: &mut usize, src: &str) -> Result<Category, GrammarError> {
    let mut left = parse_primary(cs, pos, src)?;
    while let Some(&c) = cs.get(*pos) {
        let dir = match c {
            '/' => Dir::Fwd,
            '\\' => Dir::Bwd,
            _ => break,
        };
        *pos += 1;
        let right = parse_primary(cs, pos, src)?;
        left = Category::slash(left, dir, right);
    }
    Ok(left)
}

fn parse_primary(cs: &[char], pos: &mut usize, src: &str) -> Result<Category, GrammarError> {
    let bad = || GrammarError::BadCategory(src.to_string());
    if cs.get(*pos) == Some(&'(') {
        *pos += 1;
        let c = parse_slashes(cs, pos, src)?;
        if cs.get(*pos) != Some(&')') {
            return Err(bad());
        }
        *pos += 1;
        return Ok(c);
    }
    let start = *pos;
    while cs.get(*pos).is_some_and(|c| c.is_ascii_uppercase()) {
        *pos += 1;
    }
    let name: String = cs[start..*pos].iter().collect();
    let base = match name.as_str() {
        "S" => Base::S,
        "NP" => Base::NP,
        "N" => Base::N,
        "PP" => Base::PP,
        _ => return Err(bad()),
    };
    let mut feature = None;
    if cs.get(*pos) == Some(&'[') {
        let fstart = *pos + 1;
        while cs.get(*pos).is_some_and(|c| *c != ']') {
            *pos += 1;
        }
        if cs.get(*pos) != Some(&']') {
            return Err(bad());
        }
        let ft: String = cs[fstart..*pos].iter().collect();
        *pos += 1;
        if !FEATURES.contains(&ft.as_str()) || !matches!(base, Base::S | Base::N) {
            return Err(GrammarError::BadFeature(ft));
        }
        feature = Some(ft);
    }
    Ok(Category::Atom { base, feature })
}
