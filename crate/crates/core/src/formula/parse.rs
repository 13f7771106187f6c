use std::collections::BTreeMap;

use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(
        "predicate `{pred}` used with arity {first} and arity {second} (line {line}, column {column})"
    )]
    ArityConflict {
        pred: String,
        first: usize,
        second: usize,
        line: usize,
        column: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Forall,
    Exists,
    Bot,
    Top,
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Amp,
    Meet,
    Join,
    Arrow,
    DoubleArrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::Bot => "`bot`".into(),
            Tok::Top => "`top`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Meet => "`/\\`".into(),
            Tok::Join => "`\\/`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DoubleArrow => "`<->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let push = |out: &mut Vec<Spanned>, tok: Tok| {
            out.push(Spanned {
                tok,
                line: tl,
                column: tc,
            })
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let rest = |k: usize| chars.get(i + k).copied();
        let (tok, len) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            '.' => (Tok::Dot, 1),
            '~' => (Tok::Tilde, 1),
            '&' => (Tok::Amp, 1),
            '/' if rest(1) == Some('\\') => (Tok::Meet, 2),
            '\\' if rest(1) == Some('/') => (Tok::Join, 2),
            '-' if rest(1) == Some('>') => (Tok::Arrow, 2),
            '<' if rest(1) == Some('-') && rest(2) == Some('>') => (Tok::DoubleArrow, 3),
            c if c.is_ascii_alphabetic() => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                let tok = match word.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "bot" => Tok::Bot,
                    "top" => Tok::Top,
                    _ => Tok::Ident(word),
                };
                (tok, j - start)
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        push(&mut out, tok);
        i += len;
        col += len;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    arities: BTreeMap<String, usize>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: String) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError::Syntax {
            line: t.line,
            column: t.column,
            message,
        }
    }

    fn expect(&mut self, want: Tok) -> Result<Spanned, ParseError> {
        if *self.peek() == want {
            Ok(self.bump())
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                want.describe(),
                self.peek().describe()
            )))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.meet()?;
        while *self.peek() == Tok::Join {
            self.bump();
            let rhs = self.meet()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn meet(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.strong()?;
        while *self.peek() == Tok::Meet {
            self.bump();
            let rhs = self.strong()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn strong(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::strong(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            let inner = self.unary()?;
            return Ok(Formula::not(inner));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::top())
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Forall | Tok::Exists => {
                let q = self.bump().tok;
                let var = match self.peek().clone() {
                    Tok::Ident(v) => {
                        self.bump();
                        v
                    }
                    other => {
                        return Err(self.error_here(format!(
                            "expected a variable after quantifier, found {}",
                            other.describe()
                        )))
                    }
                };
                self.expect(Tok::Dot)?;
                // the body extends as far to the right as possible
                let body = self.formula()?;
                Ok(if q == Tok::Forall {
                    Formula::forall(var, body)
                } else {
                    Formula::exists(var, body)
                })
            }
            Tok::Ident(name) => {
                let start = self.bump();
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    loop {
                        match self.peek().clone() {
                            Tok::Ident(v) => {
                                self.bump();
                                args.push(v);
                            }
                            other => {
                                return Err(self.error_here(format!(
                                    "expected a variable, found {}",
                                    other.describe()
                                )))
                            }
                        }
                        match self.peek() {
                            Tok::Comma => {
                                self.bump();
                            }
                            Tok::RParen => {
                                self.bump();
                                break;
                            }
                            other => {
                                return Err(self.error_here(format!(
                                    "expected `,` or `)`, found {}",
                                    other.describe()
                                )))
                            }
                        }
                    }
                }
                match self.arities.get(&name) {
                    Some(&k) if k != args.len() => {
                        return Err(ParseError::ArityConflict {
                            pred: name,
                            first: k,
                            second: args.len(),
                            line: start.line,
                            column: start.column,
                        })
                    }
                    Some(_) => {}
                    None => {
                        self.arities.insert(name.clone(), args.len());
                    }
                }
                Ok(Formula::Atom { pred: name, args })
            }
            other => Err(self.error_here(format!(
                "expected a formula, found {}",
                other.describe()
            ))),
        }
    }
}

/// Parses formula source text.
///
/// Precedence from loosest to tightest: `<->`, `->` (right-associative),
/// `\/`, `/\`, `&`, prefix `~`. The remaining binary connectives associate
/// to the left. A quantifier body extends as far right as possible.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        arities: BTreeMap::new(),
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error_here(format!(
            "unexpected {} after complete formula",
            p.peek().describe()
        )));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implication_of_atoms() {
        let f = parse("P(x) -> P(x)").unwrap();
        assert_eq!(
            f,
            Formula::implies(Formula::atom("P", &["x"]), Formula::atom("P", &["x"]))
        );
    }

    #[test]
    fn quantified_strong_conjunction() {
        let f = parse("forall x. (P(x) & q)").unwrap();
        assert_eq!(
            f,
            Formula::forall(
                "x",
                Formula::strong(Formula::atom("P", &["x"]), Formula::prop("q"))
            )
        );
    }

    #[test]
    fn negated_bottom_is_top() {
        let f = parse("~bot").unwrap();
        assert_eq!(
            f,
            Formula::Implies(Box::new(Formula::Bottom), Box::new(Formula::Bottom))
        );
        assert_eq!(f, parse("top").unwrap());
    }

    #[test]
    fn precedence_and_associativity() {
        let p = || Formula::prop("p");
        let q = || Formula::prop("q");
        let r = || Formula::prop("r");
        assert_eq!(
            parse("p -> q -> r").unwrap(),
            Formula::implies(p(), Formula::implies(q(), r()))
        );
        assert_eq!(
            parse("p & q /\\ r").unwrap(),
            Formula::and(Formula::strong(p(), q()), r())
        );
        assert_eq!(
            parse("p /\\ q \\/ r").unwrap(),
            Formula::or(Formula::and(p(), q()), r())
        );
        assert_eq!(
            parse("p \\/ q -> r").unwrap(),
            Formula::implies(Formula::or(p(), q()), r())
        );
        assert_eq!(
            parse("p -> q <-> r").unwrap(),
            Formula::iff(Formula::implies(p(), q()), r())
        );
        assert_eq!(
            parse("~p & q").unwrap(),
            Formula::strong(Formula::not(p()), q())
        );
        assert_eq!(
            parse("p & q & r").unwrap(),
            Formula::strong(Formula::strong(p(), q()), r())
        );
    }

    #[test]
    fn quantifier_scope_extends_right() {
        let f = parse("p & forall x. P(x) -> q").unwrap();
        assert_eq!(
            f,
            Formula::strong(
                Formula::prop("p"),
                Formula::forall(
                    "x",
                    Formula::implies(Formula::atom("P", &["x"]), Formula::prop("q"))
                )
            )
        );
        let g = parse("(forall x. P(x)) -> q").unwrap();
        assert!(matches!(g, Formula::Implies(..)));
    }

    #[test]
    fn multiline_error_positions() {
        let err = parse("p &\n  q )").unwrap_err();
        match err {
            ParseError::Syntax { line, column, .. } => {
                assert_eq!((line, column), (2, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = parse("p $ q").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, column: 3, .. }));
        assert!(parse("").is_err());
        assert!(parse("forall . P(x)").is_err());
        assert!(parse("P(x,)").is_err());
        assert!(parse("(p").is_err());
    }

    #[test]
    fn arity_conflict_reported() {
        let err = parse("P(x) & P(x, y)").unwrap_err();
        assert_eq!(
            err,
            ParseError::ArityConflict {
                pred: "P".into(),
                first: 1,
                second: 2,
                line: 1,
                column: 8
            }
        );
        assert!(matches!(
            parse("q -> q(x)"),
            Err(ParseError::ArityConflict { .. })
        ));
    }

    #[test]
    fn identifiers_with_digits_and_underscores() {
        let f = parse("x_0 -> Pred_2(a1, b_)").unwrap();
        assert_eq!(
            f,
            Formula::implies(Formula::prop("x_0"), Formula::atom("Pred_2", &["a1", "b_"]))
        );
    }
}
