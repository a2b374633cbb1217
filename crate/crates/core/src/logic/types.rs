use std::fmt;

/// Sort of a degree: integer-valued counts or rational-valued measures along a named dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Count,
    Measure(String),
    /// Unresolved sort, only present in templates and during inference.
    Var(u32),
}

impl Sort {
    pub fn measure(dim: &str) -> Self {
        Sort::Measure(dim.to_string())
    }

    pub fn is_integral(&self) -> bool {
        matches!(self, Sort::Count)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Count => write!(f, "count"),
            Sort::Measure(d) => write!(f, "{d}"),
            Sort::Var(v) => write!(f, "?{v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemType {
    Entity,
    Prop,
    Degree(Sort),
    Fun(Box<SemType>, Box<SemType>),
}

impl SemType {
    pub fn fun(arg: SemType, res: SemType) -> Self {
        SemType::Fun(Box::new(arg), Box::new(res))
    }

    /// Curried function type `a1 -> a2 -> ... -> res`.
    pub fn curried<I: IntoIterator<Item = SemType>>(args: I, res: SemType) -> Self {
        let args: Vec<_> = args.into_iter().collect();
        args.into_iter().rev().fold(res, |acc, a| SemType::fun(a, acc))
    }

    pub fn degree(sort: Sort) -> Self {
        SemType::Degree(sort)
    }

    pub fn is_degree(&self) -> bool {
        matches!(self, SemType::Degree(_))
    }

    pub fn sort(&self) -> Option<&Sort> {
        match self {
            SemType::Degree(s) => Some(s),
            _ => None,
        }
    }

    /// Argument types and final result of a curried function type.
    pub fn uncurry(&self) -> (Vec<&SemType>, &SemType) {
        let mut args = Vec::new();
        let mut cur = self;
        while let SemType::Fun(a, r) = cur {
            args.push(a.as_ref());
            cur = r;
        }
        (args, cur)
    }

    pub fn has_sort_vars(&self) -> bool {
        match self {
            SemType::Degree(Sort::Var(_)) => true,
            SemType::Fun(a, r) => a.has_sort_vars() || r.has_sort_vars(),
            _ => false,
        }
    }

    pub fn map_sorts(&self, f: &mut impl FnMut(&Sort) -> Sort) -> SemType {
        match self {
            SemType::Degree(s) => SemType::Degree(f(s)),
            SemType::Fun(a, r) => SemType::fun(a.map_sorts(f), r.map_sorts(f)),
            other => other.clone(),
        }
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::Entity => write!(f, "e"),
            SemType::Prop => write!(f, "t"),
            SemType::Degree(s) => write!(f, "d:{s}"),
            SemType::Fun(a, r) => {
                let (args, res) = self.uncurry();
                let _ = (a, r);
                write!(f, "(")?;
                for a in args {
                    write!(f, "{a} -> ")?;
                }
                write!(f, "{res})")
            }
        }
    }
}
