use std::collections::BTreeMap;

use super::{Atom, CocycleRef, ParseError, SweedlerExpr, MAX_COPIES, MAX_DEPTH};

/// Explicit variable and cocycle declarations. Variables fix the argument
/// order; a declared variable that does not occur gets depth 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Declarations {
    pub variables: Vec<String>,
    pub cocycles: Vec<String>,
}

impl Declarations {
    pub fn new<V: Into<String>, C: Into<String>>(
        variables: impl IntoIterator<Item = V>,
        cocycles: impl IntoIterator<Item = C>,
    ) -> Self {
        Declarations {
            variables: variables.into_iter().map(Into::into).collect(),
            cocycles: cocycles.into_iter().map(Into::into).collect(),
        }
    }
}

/// Parses with implicit declarations: variables and cocycles are taken in
/// order of first appearance.
pub fn parse(text: &str) -> Result<SweedlerExpr, ParseError> {
    Parser::new(text, 1, 1).run(None)
}

pub fn parse_with(text: &str, decl: &Declarations) -> Result<SweedlerExpr, ParseError> {
    Parser::new(text, 1, 1).run(Some(decl))
}

/// Like [`parse_with`] for text that starts at `line`, `column` of some
/// larger file, so that errors point into that file.
pub fn parse_at(text: &str, decl: Option<&Declarations>, line: usize, column: usize) -> Result<SweedlerExpr, ParseError> {
    Parser::new(text, line, column).run(decl)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

// where each atom was found, for error messages raised after the scan
struct Located {
    atom: Atom,
    at: usize,
}

impl Parser {
    fn new(text: &str, line: usize, column: usize) -> Self {
        Parser { chars: text.chars().collect(), pos: 0, line, column }
    }

    fn error_at(&self, at: usize, message: impl Into<String>) -> ParseError {
        let (mut line, mut column) = (self.line, self.column);
        for &c in &self.chars[..at.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        ParseError { line, column, message: message.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn at_separator(&self) -> Option<usize> {
        let rest = &self.chars[self.pos..];
        if rest.starts_with(&['(', 'x', ')']) {
            Some(3)
        } else if rest.first() == Some(&'⊗') {
            Some(1)
        } else {
            None
        }
    }

    fn digits(&mut self) -> Option<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Some(s.parse().unwrap_or(usize::MAX))
    }

    fn run(mut self, decl: Option<&Declarations>) -> Result<SweedlerExpr, ParseError> {
        let mut slots: Vec<Vec<Located>> = vec![Vec::new()];
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                break;
            }
            if let Some(len) = self.at_separator() {
                if slots.last().unwrap().is_empty() {
                    return Err(self.error_at(self.pos, "empty tensor slot"));
                }
                self.pos += len;
                slots.push(Vec::new());
                continue;
            }
            let at = self.pos;
            let atom = self.atom().map_err(|m| self.error_at(at, m))?;
            slots.last_mut().unwrap().push(Located { atom, at });
        }
        if slots.last().unwrap().is_empty() {
            return Err(self.error_at(self.pos, "empty tensor slot"));
        }
        self.validate(slots, decl)
    }

    fn atom(&mut self) -> Result<Atom, String> {
        let c = self.peek().ok_or("unexpected end of input")?;
        if c == '1' {
            self.pos += 1;
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                return Err("unknown token: numbers other than the unit `1` are not atoms".into());
            }
            return Ok(Atom::Unit);
        }
        if c == 'S' && self.chars.get(self.pos + 1) == Some(&'(') {
            self.pos += 2;
            self.skip_ws();
            let inner = self.atom()?;
            self.skip_ws();
            if self.peek() != Some(')') {
                return Err("expected `)` closing `S(`".into());
            }
            self.pos += 1;
            return Ok(Atom::Antipode(Box::new(inner)));
        }
        if c.is_ascii_lowercase() {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_lowercase() || c == '_') {
                self.pos += 1;
            }
            let var: String = self.chars[start..self.pos].iter().collect();
            let index = self.digits().ok_or_else(|| format!("variable `{var}` needs a leg index, as in `{var}1`"))?;
            if index == 0 {
                return Err(format!("legs are numbered from 1, found `{var}0`"));
            }
            return Ok(Atom::Leg { var, index });
        }
        if c.is_ascii_uppercase() {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_uppercase() || c == '_') {
                self.pos += 1;
            }
            let name: String = self.chars[start..self.pos].iter().collect();
            if name == "S" {
                return Err("`S` is the antipode and must be followed by `(`".into());
            }
            let (mut inverse, mut primes) = (false, 0);
            loop {
                match self.peek() {
                    Some('i') if !inverse => inverse = true,
                    Some('\'') => primes += 1,
                    _ => break,
                }
                self.pos += 1;
            }
            if primes >= MAX_COPIES {
                return Err(format!("at most {MAX_COPIES} copies of a cocycle are supported ({primes} primes)"));
            }
            let leg = self.digits().ok_or_else(|| format!("cocycle `{name}` needs a leg, `1` or `2`"))?;
            if leg != 1 && leg != 2 {
                return Err(format!("cocycle legs are 1 or 2, found {leg}"));
            }
            let sub = if self.peek() == Some('.') {
                self.pos += 1;
                let s = self.digits().ok_or("expected a sub-leg index after `.`")?;
                if s == 0 {
                    return Err("sub-legs are numbered from 1".into());
                }
                Some(s)
            } else {
                None
            };
            return Ok(Atom::CocycleLeg { cocycle: CocycleRef { name, inverse, primes }, leg, sub });
        }
        Err(format!("unknown token `{c}`"))
    }

    fn validate(&self, slots: Vec<Vec<Located>>, decl: Option<&Declarations>) -> Result<SweedlerExpr, ParseError> {
        // variable -> (leg -> position); cocycle -> leg -> sub-leg -> position
        let mut var_legs: BTreeMap<String, BTreeMap<usize, usize>> = BTreeMap::new();
        let mut var_order: Vec<String> = Vec::new();
        let mut cocycles: Vec<CocycleRef> = Vec::new();
        let mut coc_legs: BTreeMap<(CocycleRef, usize), BTreeMap<Option<usize>, usize>> = BTreeMap::new();

        fn leaf(a: &Atom) -> &Atom {
            match a {
                Atom::Antipode(inner) => leaf(inner),
                other => other,
            }
        }

        for located in slots.iter().flatten() {
            let at = located.at;
            match leaf(&located.atom) {
                Atom::Unit | Atom::Antipode(_) => {}
                Atom::Leg { var, index } => {
                    if let Some(d) = decl {
                        if !d.variables.contains(var) {
                            return Err(self.error_at(at, format!("undeclared variable `{var}`")));
                        }
                    }
                    if *index > MAX_DEPTH {
                        return Err(self.error_at(at, format!("leg {var}{index} exceeds the depth cap {MAX_DEPTH}")));
                    }
                    if !var_order.contains(var) {
                        var_order.push(var.clone());
                    }
                    if var_legs.entry(var.clone()).or_default().insert(*index, at).is_some() {
                        return Err(self.error_at(at, format!("repeated leg `{var}{index}`")));
                    }
                }
                Atom::CocycleLeg { cocycle, leg, sub } => {
                    if let Some(d) = decl {
                        if !d.cocycles.contains(&cocycle.name) {
                            return Err(self.error_at(at, format!("undeclared cocycle `{}`", cocycle.name)));
                        }
                    }
                    if sub.is_some_and(|s| s > MAX_DEPTH) {
                        return Err(self.error_at(at, format!("sub-leg exceeds the depth cap {MAX_DEPTH}")));
                    }
                    if !cocycles.contains(cocycle) {
                        cocycles.push(cocycle.clone());
                    }
                    let entry = coc_legs.entry((cocycle.clone(), *leg)).or_default();
                    let mixed = match sub {
                        None => !entry.is_empty(),
                        Some(_) => entry.contains_key(&None),
                    };
                    if mixed {
                        return Err(self.error_at(
                            at,
                            format!("leg {cocycle}{leg} is used both whole and split into sub-legs"),
                        ));
                    }
                    if entry.insert(*sub, at).is_some() {
                        return Err(self.error_at(at, format!("repeated cocycle leg `{}`", located.atom)));
                    }
                }
            }
        }

        let mut variables = Vec::new();
        for var in &var_order {
            let legs = &var_legs[var];
            let depth = *legs.keys().next_back().unwrap();
            if let Some(missing) = (1..=depth).find(|i| !legs.contains_key(i)) {
                let at = legs[&depth];
                return Err(self.error_at(
                    at,
                    format!("non-contiguous legs: `{var}{depth}` is used but `{var}{missing}` is not"),
                ));
            }
            variables.push((var.clone(), depth));
        }
        for ((cocycle, leg), subs) in &coc_legs {
            let used: Vec<usize> = subs.keys().flatten().copied().collect();
            if let Some(&max) = used.last() {
                if let Some(missing) = (1..=max).find(|i| !used.contains(i)) {
                    let at = subs[&Some(max)];
                    return Err(self.error_at(
                        at,
                        format!("non-contiguous legs: `{cocycle}{leg}.{max}` is used but `{cocycle}{leg}.{missing}` is not"),
                    ));
                }
            }
        }
        if let Some(d) = decl {
            variables = d
                .variables
                .iter()
                .map(|v| (v.clone(), variables.iter().find(|(w, _)| w == v).map_or(0, |(_, k)| *k)))
                .collect();
        }
        Ok(SweedlerExpr {
            variables,
            cocycles,
            slots: slots.into_iter().map(|s| s.into_iter().map(|l| l.atom).collect()).collect(),
        })
    }
}

/// Depth at which leg `leg` of a cocycle instance is expanded: 1 when used
/// whole, the largest sub-leg when split, 0 when unused.
pub(super) fn cocycle_leg_depth(e: &SweedlerExpr, c: &CocycleRef, leg: usize) -> usize {
    fn visit(a: &Atom, c: &CocycleRef, leg: usize, depth: &mut usize) {
        match a {
            Atom::Antipode(inner) => visit(inner, c, leg, depth),
            Atom::CocycleLeg { cocycle, leg: l, sub } if cocycle == c && *l == leg => {
                *depth = (*depth).max(sub.unwrap_or(1));
            }
            _ => {}
        }
    }
    let mut depth = 0;
    for a in e.slots.iter().flatten() {
        visit(a, c, leg, &mut depth);
    }
    depth
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_expressions() {
        let e = parse("h1 S(h2)").unwrap();
        assert_eq!(e.variables, vec![("h".to_string(), 2)]);
        assert_eq!(e.slot_count(), 1);
        assert_eq!(e.slots[0][1], Atom::Antipode(Box::new(Atom::Leg { var: "h".into(), index: 2 })));
        assert_eq!(e.to_string(), "h1 S(h2)");
    }

    #[test]
    fn psi_expression() {
        let e = parse("h1 X1 S(h4) Xi1 (x) h2 X2 S(h3) Xi2").unwrap();
        assert_eq!(e.variables, vec![("h".to_string(), 4)]);
        assert_eq!(e.slot_count(), 2);
        assert_eq!(e.cocycles.len(), 2);
        assert!(e.cocycles[1].inverse);
        assert_eq!(e.cocycle_names(), vec!["X"]);
    }

    #[test]
    fn unicode_separator_and_nested_antipode() {
        let e = parse("S(S(h1)) ⊗ 1").unwrap();
        assert_eq!(e.slot_count(), 2);
        assert_eq!(e.slots[1], vec![Atom::Unit]);
        assert_eq!(e.to_string(), "S(S(h1)) (x) 1");
    }

    #[test]
    fn primes_and_sub_legs() {
        let e = parse("X'1 X2.1 (x) X''i2 X2.2 Xi'1").unwrap();
        let names: Vec<String> = e.cocycles.iter().map(ToString::to_string).collect();
        assert_eq!(names, ["X'", "X", "Xi''", "Xi'"]);
        assert_eq!(cocycle_leg_depth(&e, &e.cocycles[1], 2), 2);
        assert_eq!(cocycle_leg_depth(&e, &e.cocycles[1], 1), 0);
        assert_eq!(cocycle_leg_depth(&e, &e.cocycles[0], 1), 1);
    }

    #[test]
    fn non_contiguous_legs() {
        let err = parse("h1 h3").unwrap_err();
        assert!(err.message.contains("non-contiguous legs"), "{err}");
        assert_eq!((err.line, err.column), (1, 4));
        assert!(parse("X2.1 X2.3").unwrap_err().message.contains("non-contiguous"));
    }

    #[test]
    fn positioned_errors() {
        let err = parse("h1 (x)\n  h2 ? h3").unwrap_err();
        assert_eq!((err.line, err.column), (2, 6));
        assert!(err.message.contains("unknown token"));
        let err = parse_at("h1 #", None, 7, 10).unwrap_err();
        assert_eq!((err.line, err.column), (7, 13));
    }

    #[test]
    fn malformed_inputs() {
        for bad in ["", "h1 (x)", "(x) h1", "h1 h1", "h0", "h", "X3", "S h1", "S(h1", "X1 X1", "X2 X2.1", "2", "X''''1"] {
            assert!(parse(bad).is_err(), "{bad:?} should not parse");
        }
        assert!(parse("h13").is_err(), "depth above the cap");
    }

    #[test]
    fn declarations() {
        let decl = Declarations::new(["h", "a"], ["X"]);
        let e = parse_with("h1 X1 (x) h2 X2", &decl).unwrap();
        assert_eq!(e.variables, vec![("h".to_string(), 2), ("a".to_string(), 0)]);
        let err = parse_with("h1 Y1", &decl).unwrap_err();
        assert!(err.message.contains("undeclared cocycle `Y`"));
        assert_eq!(err.column, 4);
        assert!(parse_with("b1", &decl).unwrap_err().message.contains("undeclared variable"));
    }
}
