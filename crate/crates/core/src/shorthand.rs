//! Inline potential syntax.
//!
//! ```text
//! x^4                    λx⁴
//! x^3 + 0.5 x^4 - 1/3*x  one mode, shared coupling `lambda`
//! exp(x)  cosh(x)[30]    series, default cutoff 24
//! x^1; y^4               one mode per `;`, couplings lambda1, lambda2
//! x^4 @g; y^4 @g         explicit coupling names
//! x y^2                  cross-mode product (parsed, then rejected by the solver)
//! ```

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::potentials::{CoupledTerm, ModeSpec, PotentialSpec, SeriesKind, SeriesSpec, TermSpec, DEFAULT_COUPLING};
use crate::radical::{parse_decimal, Radical2Scalar};

pub const DEFAULT_SERIES_CUTOFF: u32 = 24;

const VARIABLES: [char; 4] = ['x', 'y', 'z', 'w'];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Caret,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    At,
    Semi,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.chars().enumerate().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (col, c) = chars[i];
        let col = col + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            // exponent only when followed by a digit or sign+digit
            if i < chars.len() && (chars[i].1 == 'e' || chars[i].1 == 'E') {
                let next = chars.get(i + 1).map(|c| c.1);
                let after = chars.get(i + 2).map(|c| c.1);
                let digit = |c: Option<char>| c.is_some_and(|c| c.is_ascii_digit());
                if digit(next) || (matches!(next, Some('+' | '-')) && digit(after)) {
                    i += 2;
                    while i < chars.len() && chars[i].1.is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            out.push((col, Tok::Num(chars[start..i].iter().map(|c| c.1).collect())));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((col, Tok::Ident(chars[start..i].iter().map(|c| c.1).collect())));
            continue;
        }
        let tok = match c {
            '^' => Tok::Caret,
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '@' => Tok::At,
            ';' => Tok::Semi,
            _ => return Err(Error::Parse { column: col, message: format!("unexpected character `{c}`") }),
        };
        out.push((col, tok));
        i += 1;
    }
    Ok(out)
}

enum Atom {
    Power { var: char, power: u32 },
    Product(BTreeMap<char, u32>),
    Constant,
    Series { kind: SeriesKind, var: char, cutoff: u32 },
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { column: self.column(), message: message.into() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn integer(&mut self, what: &str) -> Result<u32> {
        let col = self.column();
        match self.bump() {
            Some(Tok::Num(s)) => s.parse::<u32>().map_err(|_| Error::Parse {
                column: col,
                message: format!("{what} must be a non-negative integer, got `{s}`"),
            }),
            _ => Err(Error::Parse { column: col, message: format!("expected {what}") }),
        }
    }

    fn number(&mut self) -> Result<BigRational> {
        let col = self.column();
        let Some(Tok::Num(text)) = self.bump() else {
            return Err(Error::Parse { column: col, message: "expected a number".into() });
        };
        let value = parse_decimal(&text)
            .ok_or_else(|| Error::Parse { column: col, message: format!("malformed number `{text}`") })?;
        // a/b
        if self.peek() == Some(&Tok::Slash) && matches!(self.toks.get(self.pos + 1), Some((_, Tok::Num(_)))) {
            self.pos += 1;
            let dcol = self.column();
            let denom = self.number()?;
            if denom == BigRational::from_integer(0.into()) {
                return Err(Error::Parse { column: dcol, message: "division by zero".into() });
            }
            return Ok(value / denom);
        }
        Ok(value)
    }

    fn variable(&self, name: &str) -> Option<char> {
        let mut chars = name.chars();
        let c = chars.next()?;
        (chars.next().is_none() && VARIABLES.contains(&c)).then_some(c)
    }

    fn atom(&mut self) -> Result<Atom> {
        let col = self.column();
        let Some(Tok::Ident(name)) = self.peek().cloned() else {
            return self.err("expected a variable such as `x`, or `exp(x)` / `cosh(x)`");
        };
        let kind = match name.as_str() {
            "exp" => Some(SeriesKind::Exp),
            "cosh" => Some(SeriesKind::Cosh),
            _ => None,
        };
        if let Some(kind) = kind {
            self.pos += 1;
            self.expect(&Tok::LParen, "`(`")?;
            let vcol = self.column();
            let var = match self.bump() {
                Some(Tok::Ident(v)) => self.variable(&v),
                _ => None,
            }
            .ok_or(Error::Parse { column: vcol, message: "series argument must be a single variable".into() })?;
            self.expect(&Tok::RParen, "`)`")?;
            let cutoff = if self.eat(&Tok::LBracket) {
                let c = self.integer("series cutoff")?;
                self.expect(&Tok::RBracket, "`]`")?;
                c
            } else {
                DEFAULT_SERIES_CUTOFF
            };
            return Ok(Atom::Series { kind, var, cutoff });
        }
        let mut factors: BTreeMap<char, u32> = BTreeMap::new();
        while let Some(Tok::Ident(name)) = self.peek().cloned() {
            let fcol = self.column();
            let Some(var) = self.variable(&name) else {
                if factors.is_empty() {
                    return Err(Error::Parse {
                        column: col,
                        message: format!("unknown symbol `{name}`; variables are x, y, z, w"),
                    });
                }
                return Err(Error::Parse { column: fcol, message: format!("unknown symbol `{name}`") });
            };
            self.pos += 1;
            let power = if self.eat(&Tok::Caret) { self.integer("exponent")? } else { 1 };
            *factors.entry(var).or_insert(0) += power;
            if self.peek() == Some(&Tok::Star) && matches!(self.toks.get(self.pos + 1), Some((_, Tok::Ident(_)))) {
                self.pos += 1;
            }
        }
        match factors.len() {
            1 => {
                let (&var, &power) = factors.iter().next().expect("one factor");
                Ok(Atom::Power { var, power })
            }
            _ => Ok(Atom::Product(factors)),
        }
    }

    /// `[sign] [coef [*]] atom [@name]`, or a bare constant.
    fn term(&mut self, sign: i64) -> Result<(BigRational, Atom, Option<String>, usize)> {
        let col = self.column();
        let mut coef = BigRational::from_integer(sign.into());
        let mut atom = None;
        if matches!(self.peek(), Some(Tok::Num(_))) {
            coef *= self.number()?;
            self.eat(&Tok::Star);
            if !matches!(self.peek(), Some(Tok::Ident(_))) {
                atom = Some(Atom::Constant);
            }
        }
        let atom = match atom {
            Some(a) => a,
            None => self.atom()?,
        };
        let coupling = if self.eat(&Tok::At) {
            match self.bump() {
                Some(Tok::Ident(name)) => Some(name),
                _ => {
                    return Err(Error::Parse {
                        column: self.column().saturating_sub(1).max(1),
                        message: "expected a coupling name after `@`".into(),
                    })
                }
            }
        } else {
            None
        };
        Ok((coef, atom, coupling, col))
    }
}

/// Parses the inline syntax into a [`PotentialSpec`] of order 1.
/// coefficient, atom, coupling override, column
type RawTerm = (BigRational, Atom, Option<String>, usize);

pub fn parse_potential(text: &str) -> Result<PotentialSpec> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end: text.chars().count() + 1 };
    if p.peek().is_none() {
        return p.err("empty potential");
    }
    let mut raw_modes: Vec<Vec<RawTerm>> = vec![Vec::new()];
    let mut sign = 1;
    let mut expect_term = true;
    while let Some(tok) = p.peek().cloned() {
        match tok {
            Tok::Plus | Tok::Minus if expect_term && sign == 1 && raw_modes.last().is_some_and(|m| m.is_empty()) => {
                p.pos += 1;
                if tok == Tok::Minus {
                    sign = -1;
                }
            }
            Tok::Plus | Tok::Minus if !expect_term => {
                p.pos += 1;
                sign = if tok == Tok::Minus { -1 } else { 1 };
                expect_term = true;
            }
            Tok::Semi => {
                if expect_term {
                    return p.err("expected a term before `;`");
                }
                p.pos += 1;
                raw_modes.push(Vec::new());
                expect_term = true;
            }
            _ if expect_term => {
                let term = p.term(sign)?;
                raw_modes.last_mut().expect("non-empty").push(term);
                sign = 1;
                expect_term = false;
            }
            _ => return p.err("expected `+`, `-` or `;` between terms"),
        }
    }
    if expect_term {
        return p.err("expected a term");
    }

    let multi = raw_modes.len() > 1;
    let mut modes = Vec::new();
    let mut coupled = Vec::new();
    let mut used_vars: Vec<Option<char>> = Vec::new();
    for (index, raw) in raw_modes.into_iter().enumerate() {
        let default = if multi { format!("{DEFAULT_COUPLING}{}", index + 1) } else { DEFAULT_COUPLING.to_string() };
        let mut mode = ModeSpec::default();
        let mut var: Option<char> = None;
        for (coef, atom, coupling, col) in raw {
            let coupling = coupling.unwrap_or_else(|| default.clone());
            let coefficient = Radical2Scalar::rational(coef);
            let mut claim = |v: char| -> Result<()> {
                match var {
                    Some(existing) if existing != v => Err(Error::Parse {
                        column: col,
                        message: format!("mode uses both `{existing}` and `{v}`; separate modes with `;`"),
                    }),
                    _ => {
                        var = Some(v);
                        Ok(())
                    }
                }
            };
            match atom {
                Atom::Constant => mode.terms.push(TermSpec { power: 0, coupling, coefficient }),
                Atom::Power { var: v, power } => {
                    claim(v)?;
                    mode.terms.push(TermSpec { power, coupling, coefficient });
                }
                Atom::Series { kind, var: v, cutoff } => {
                    claim(v)?;
                    if mode.series.is_some() {
                        return Err(Error::Parse { column: col, message: "only one series per mode".into() });
                    }
                    mode.series = Some(SeriesSpec { kind, cutoff, coupling, coefficient, coefficients: Vec::new() });
                }
                Atom::Product(factors) => {
                    let width = factors
                        .keys()
                        .map(|v| VARIABLES.iter().position(|w| w == v).expect("known variable") + 1)
                        .max()
                        .unwrap_or(0);
                    let powers = (0..width).map(|i| factors.get(&VARIABLES[i]).copied().unwrap_or(0)).collect();
                    coupled.push(CoupledTerm { powers, coupling, coefficient });
                }
            }
        }
        if let Some(v) = var.filter(|_| multi && used_vars.contains(&var)) {
            return Err(Error::Parse { column: 1, message: format!("variable `{v}` appears in more than one mode") });
        }
        used_vars.push(var);
        if let Some(v) = var {
            if multi || v != 'x' {
                mode.name = Some(v.to_string());
            }
        }
        modes.push(mode);
    }
    // a mode made only of cross terms contributes nothing on its own
    modes.retain(|m| !m.terms.is_empty() || m.series.is_some());
    if modes.is_empty() && coupled.is_empty() {
        return Err(Error::Parse { column: 1, message: "no terms".into() });
    }
    Ok(PotentialSpec { modes, order: 1, coupled })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Radical2Scalar as R;

    fn powers(spec: &PotentialSpec, mode: usize) -> Vec<(u32, String, R)> {
        spec.modes[mode].terms.iter().map(|t| (t.power, t.coupling.clone(), t.coefficient.clone())).collect()
    }

    #[test]
    fn monomial() {
        let spec = parse_potential("x^4").unwrap();
        assert_eq!(spec, PotentialSpec::single(ModeSpec::monomial(4), 1));
    }

    #[test]
    fn sums_and_coefficients() {
        let spec = parse_potential("x^3 + 0.5 x^4 - 1/3*x + 2").unwrap();
        assert_eq!(
            powers(&spec, 0),
            vec![
                (3, "lambda".into(), R::integer(1)),
                (4, "lambda".into(), R::ratio(1, 2)),
                (1, "lambda".into(), R::ratio(-1, 3)),
                (0, "lambda".into(), R::integer(2)),
            ]
        );
        let lead = parse_potential("-2x^2").unwrap();
        assert_eq!(powers(&lead, 0), vec![(2, "lambda".into(), R::integer(-2))]);
    }

    #[test]
    fn series_keywords() {
        let spec = parse_potential("exp(x)").unwrap();
        let s = spec.modes[0].series.as_ref().unwrap();
        assert_eq!((s.kind, s.cutoff), (SeriesKind::Exp, DEFAULT_SERIES_CUTOFF));
        let spec = parse_potential("0.5 cosh(x)[30] @mu").unwrap();
        let s = spec.modes[0].series.as_ref().unwrap();
        assert_eq!(
            (s.kind, s.cutoff, s.coupling.as_str(), s.coefficient.clone()),
            (SeriesKind::Cosh, 30, "mu", R::ratio(1, 2))
        );
    }

    #[test]
    fn multimode() {
        let spec = parse_potential("x^1; y^4").unwrap();
        assert_eq!(spec.modes.len(), 2);
        assert_eq!(powers(&spec, 0), vec![(1, "lambda1".into(), R::integer(1))]);
        assert_eq!(powers(&spec, 1), vec![(4, "lambda2".into(), R::integer(1))]);
        assert_eq!(spec.modes[1].name.as_deref(), Some("y"));
        let shared = parse_potential("x^4 @g; y^4 @g; z^4 @g").unwrap();
        assert!(shared.modes.iter().all(|m| m.terms[0].coupling == "g"));
    }

    #[test]
    fn cross_terms() {
        let spec = parse_potential("x^2; y^2; x y^2").unwrap();
        assert_eq!(
            spec.coupled,
            vec![CoupledTerm { powers: vec![1, 2], coupling: "lambda3".into(), coefficient: R::integer(1) }]
        );
        assert_eq!(spec.modes.len(), 2);
    }

    #[test]
    fn errors_carry_columns() {
        let col = |s: &str| match parse_potential(s) {
            Err(Error::Parse { column, .. }) => column,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(col("x^"), 3);
        assert_eq!(col("x^4 +"), 6);
        assert_eq!(col("x^4 $"), 5);
        assert_eq!(col("q^2"), 1);
        assert_eq!(col("x^4 + y^2"), 7);
        assert_eq!(col("x^-1"), 3);
        assert_eq!(col(""), 1);
        assert_eq!(col("exp(x"), 6);
        assert_eq!(col("x^4 2"), 5);
        assert_eq!(col("; x"), 1);
    }
}
