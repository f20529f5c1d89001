//! Text form of operator expressions and kets.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | factor
//! factor  := number | number'i' | 'i' | '(' expr ')' | atom ['^' ['-'] int] | operator
//! operator:= ('a' | 'b' | 'd' | 'A') [''''] '(' mom [',' ('s' | 'g') '=' disc] ';' inner [',' 'G' '=' disc] ')'
//! mom     := ident | '[' q ',' q ',' q ']'
//! inner   := ident | '[' q ',' q ',' q ',' q ']' | '~' [mom]
//! ket     := '|0>' | expr '|0>'
//! ```

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{imag_unit, parse_rational, re, Rational};
use crate::fock::FockState;
use crate::opalg::{Atom, Disc, Discrete, Field, InnerLabel, LadderOperator, MomentumLabel, OmegaMass, OperatorExpr};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Imag(Rational),
    Ident(String),
    Prime,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Eq,
    Star,
    Plus,
    Minus,
    Caret,
    Tilde,
    Ket,
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let err = |msg: String| Error::Syntax { line: l0, col: c0, msg };
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
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && (chars[i] == '/' || chars[i] == '.') && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let q = parse_rational(&text).ok_or_else(|| err(format!("bad number {text:?}")))?;
            if i < chars.len() && chars[i] == 'i' && !chars.get(i + 1).is_some_and(|&c| is_ident_char(c)) {
                i += 1;
                Tok::Imag(q)
            } else {
                Tok::Num(q)
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c == '|' {
            if chars.get(i + 1) == Some(&'0') && chars.get(i + 2) == Some(&'>') {
                i += 3;
                Tok::Ket
            } else {
                return Err(err("expected |0>".into()));
            }
        } else {
            i += 1;
            match c {
                '\'' => Tok::Prime,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '=' => Tok::Eq,
                '*' => Tok::Star,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '^' => Tok::Caret,
                '~' => Tok::Tilde,
                _ => return Err(err(format!("unexpected character {c:?}"))),
            }
        };
        col += i - start;
        out.push(Spanned { tok, line: l0, col: c0 });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let s = &self.toks[self.pos];
        Err(Error::Syntax { line: s.line, col: s.col, msg: msg.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            other => self.error(format!("expected {what}, found {}", describe(&other))),
        }
    }

    fn expr(&mut self) -> Result<OperatorExpr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.next();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<OperatorExpr> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.next();
            acc = acc * self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<OperatorExpr> {
        if *self.peek() == Tok::Minus {
            self.next();
            return Ok(-self.unary()?);
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<OperatorExpr> {
        match self.peek().clone() {
            Tok::Num(q) => {
                self.next();
                Ok(OperatorExpr::scalar(re(q)))
            }
            Tok::Imag(q) => {
                self.next();
                Ok(OperatorExpr::scalar(Complex::new(Rational::zero(), q)))
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if name == "i" {
                    self.next();
                    return Ok(OperatorExpr::scalar(imag_unit()));
                }
                if let Some(field) = Field::from_head(&name) {
                    if matches!(self.peek_at(1), Tok::Prime | Tok::LParen) {
                        self.next();
                        return Ok(OperatorExpr::op(self.operator(field)?));
                    }
                }
                let (line, col) = (self.toks[self.pos].line, self.toks[self.pos].col);
                self.next();
                let atom = self.atom(&name, line, col)?;
                let mut exp = 1;
                if *self.peek() == Tok::Caret {
                    self.next();
                    let neg = if *self.peek() == Tok::Minus {
                        self.next();
                        true
                    } else {
                        false
                    };
                    exp = match self.next() {
                        Tok::Num(q) if q.is_integer() => {
                            let v: i32 = q.to_integer().try_into().map_err(|_| Error::Syntax {
                                line,
                                col,
                                msg: "exponent out of range".into(),
                            })?;
                            if neg {
                                -v
                            } else {
                                v
                            }
                        }
                        _ => return Err(Error::Syntax { line, col, msg: "exponent must be an integer".into() }),
                    };
                }
                Ok(OperatorExpr::atom(atom, exp))
            }
            other => self.error(format!("expected a factor, found {}", describe(&other))),
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let neg = if *self.peek() == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Num(q) => {
                self.next();
                Ok(if neg { -q } else { q })
            }
            other => self.error(format!("expected a number, found {}", describe(&other))),
        }
    }

    fn vector(&mut self, n: usize) -> Result<Vec<Rational>> {
        self.expect(Tok::LBrack, "'['")?;
        let mut v = vec![self.rational()?];
        while *self.peek() == Tok::Comma {
            self.next();
            v.push(self.rational()?);
        }
        if v.len() != n {
            return self.error(format!("expected a vector of {n} components, got {}", v.len()));
        }
        self.expect(Tok::RBrack, "']'")?;
        Ok(v)
    }

    fn momentum(&mut self) -> Result<MomentumLabel> {
        if *self.peek() == Tok::LBrack {
            let v = self.vector(3)?;
            Ok(MomentumLabel::Bound(v.try_into().expect("length checked")))
        } else {
            Ok(MomentumLabel::Symbol(self.ident("a momentum label")?))
        }
    }

    /// `~` alone refers to the operator's own momentum, passed as `own`.
    fn inner(&mut self, own: Option<&MomentumLabel>) -> Result<InnerLabel> {
        match self.peek() {
            Tok::LBrack => {
                let v = self.vector(4)?;
                Ok(InnerLabel::Bound(v.try_into().expect("length checked")))
            }
            Tok::Tilde => {
                self.next();
                match own {
                    Some(k) if matches!(self.peek(), Tok::Comma | Tok::RParen) => Ok(InnerLabel::OnShell(k.clone())),
                    _ => Ok(InnerLabel::OnShell(self.momentum()?)),
                }
            }
            _ => Ok(InnerLabel::Symbol(self.ident("an inner label")?)),
        }
    }

    fn disc(&mut self) -> Result<Disc> {
        match self.peek().clone() {
            Tok::Num(q) if q.is_integer() => {
                self.next();
                match u8::try_from(q.to_integer()) {
                    Ok(v) => Ok(Disc::Value(v)),
                    Err(_) => self.error("label out of range"),
                }
            }
            Tok::Ident(s) => {
                self.next();
                Ok(Disc::Symbol(s))
            }
            other => self.error(format!("expected a discrete label, found {}", describe(&other))),
        }
    }

    fn keyed_disc(&mut self, key: &str) -> Result<Disc> {
        let k = self.ident(&format!("'{key}='"))?;
        if k != key {
            return self.error(format!("expected '{key}=', found {k:?}"));
        }
        self.expect(Tok::Eq, "'='")?;
        self.disc()
    }

    fn operator(&mut self, field: Field) -> Result<LadderOperator> {
        let (line, col) = (self.toks[self.pos - 1].line, self.toks[self.pos - 1].col);
        let dagger = if *self.peek() == Tok::Prime {
            self.next();
            true
        } else {
            false
        };
        self.expect(Tok::LParen, "'('")?;
        let k = self.momentum()?;
        let first = match field {
            Field::Scalar => None,
            Field::DiracParticle | Field::DiracAntiparticle => {
                self.expect(Tok::Comma, "',' before the spin label")?;
                Some(self.keyed_disc("s")?)
            }
            Field::Gauge => {
                self.expect(Tok::Comma, "',' before the polarization label")?;
                Some(self.keyed_disc("g")?)
            }
        };
        self.expect(Tok::Semi, "';'")?;
        let big_k = self.inner(Some(&k))?;
        let discrete = match (field, first) {
            (Field::Scalar, _) => Discrete::None,
            (Field::Gauge, Some(g)) => {
                self.expect(Tok::Comma, "',' before the inner polarization label")?;
                Discrete::Pol(g, self.keyed_disc("G")?)
            }
            (_, Some(s)) => Discrete::Spin(s),
            (_, None) => unreachable!(),
        };
        self.expect(Tok::RParen, "')'")?;
        let op = LadderOperator::new(field, false, k, big_k, discrete)
            .map_err(|e| Error::Syntax { line, col, msg: e.to_string() })?;
        Ok(if dagger { op.dag() } else { op })
    }

    fn atom(&mut self, name: &str, line: usize, col: usize) -> Result<Atom> {
        let simple = match name {
            "Lambda" => Some(Atom::Lambda),
            "Vreg" => Some(Atom::Vreg),
            "twopi" => Some(Atom::TwoPi),
            _ => None,
        };
        if let Some(a) = simple {
            return Ok(a);
        }
        let known = ["omega", "omegaA", "k0m", "kron", "eta", "etaI", "delta4", "delta3"];
        if !known.contains(&name) {
            return Err(Error::Syntax { line, col, msg: format!("unknown operator or factor {name:?}") });
        }
        self.expect(Tok::LParen, "'('")?;
        let zero = matches!(self.peek(), Tok::Num(q) if q.is_zero()) && *self.peek_at(1) == Tok::RParen;
        let atom = match name {
            "omega" => Atom::Omega(OmegaMass::Scalar, self.momentum()?),
            "omegaA" => Atom::Omega(OmegaMass::Gauge, self.momentum()?),
            "k0m" => Atom::K0OverM(self.momentum()?),
            "delta4" if zero => {
                self.next();
                Atom::Delta4Zero
            }
            "delta3" if zero => {
                self.next();
                Atom::Delta3Zero
            }
            "delta4" => {
                let a = self.inner(None)?;
                self.expect(Tok::Comma, "','")?;
                Atom::delta4(a, self.inner(None)?)
            }
            "delta3" => {
                let a = self.momentum()?;
                self.expect(Tok::Comma, "','")?;
                Atom::delta3(a, self.momentum()?)
            }
            _ => {
                let a = self.disc()?;
                self.expect(Tok::Comma, "','")?;
                let b = self.disc()?;
                match name {
                    "kron" => Atom::kron(a, b),
                    "eta" => Atom::eta(a, b),
                    _ => Atom::eta_inner(a, b),
                }
            }
        };
        self.expect(Tok::RParen, "')'")?;
        Ok(atom)
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(q) | Tok::Imag(q) => format!("number {q}"),
        Tok::Ident(s) => format!("{s:?}"),
        Tok::Ket => "'|0>'".into(),
        Tok::Eof => "end of input".into(),
        other => format!("{other:?}"),
    }
}

/// Parses an operator expression into canonical form.
///
/// ```
/// use innerfield::cli::parse_expression;
///
/// let e = parse_expression("2 * b(k,s=1;K) + 0 * d(k,s=2;K)").unwrap();
/// assert_eq!(e.len(), 1);
/// assert_eq!(parse_expression(&e.to_string()).unwrap(), e);
/// assert!(parse_expression("A'(k,g=0;K,G=0)").is_err());
/// ```
pub fn parse_expression(src: &str) -> Result<OperatorExpr> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after expression", describe(p.peek())));
    }
    Ok(e)
}

/// Parses `|0>` or `<expr> |0>` into a state built from creators.
pub fn parse_ket(src: &str) -> Result<FockState> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    if *p.peek() == Tok::Ket {
        p.next();
        p.expect(Tok::Eof, "end of input")?;
        return Ok(FockState::vacuum());
    }
    let e = p.expr()?;
    p.expect(Tok::Ket, "'|0>'")?;
    p.expect(Tok::Eof, "end of input")?;
    FockState::from_expr(&e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::commutator;

    #[test]
    fn monomial_and_order() {
        let e = parse_expression("a'(k;K) * a(h;H)").unwrap();
        assert_eq!(e.to_string(), "a'(k;K) * a(h;H)");
        let f = parse_expression("a(h;H) * a'(k;K)").unwrap();
        assert_ne!(e, f);
    }

    #[test]
    fn round_trip_of_printed_forms() {
        let c = commutator(&parse_expression("a(k;K)").unwrap(), &parse_expression("a'(h;H)").unwrap());
        assert_eq!(parse_expression(&c.to_string()).unwrap(), c);
        for src in [
            "(1/2-3i) * A'(k,g=0;~,G=3) * b([1,-1/2,0],s=2;[2,0,0,1/3])",
            "-i * kron(s,t) * delta4(~k,[1,0,0,0]) + 3/4i * delta3(0) * Vreg^2",
            "i - a(k;K) * a'(h;H)",
            "k0m(p) * etaI(1,G) * eta(g,0) * omegaA([0,0,1])^-2 * delta4(0)",
        ] {
            let e = parse_expression(src).unwrap();
            assert_eq!(parse_expression(&e.to_string()).unwrap(), e, "{src} -> {e}");
        }
    }

    #[test]
    fn errors_carry_position() {
        match parse_expression("a(k;K) *\n  x(k)") {
            Err(Error::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expression("A'(k,g=0;K,G=0)"), Err(Error::Syntax { .. })));
        assert!(parse_expression("b(k;K)").is_err());
        assert!(parse_expression("a(k;K) +").is_err());
    }

    #[test]
    fn kets() {
        assert!(parse_ket("|0>").unwrap().expr() == &OperatorExpr::one());
        let s = parse_ket("2 * a'(k;K) |0>").unwrap();
        assert_eq!(parse_ket(&s.to_string()).unwrap(), s);
        assert!(matches!(parse_ket("a(k;K) |0>"), Err(Error::NotAKet(_))));
    }
}
