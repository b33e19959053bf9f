//! Operator expressions such as `X(0) Y(1) - 0.5i Z(2) + (1+2i) I`.
//!
//! Products are written by juxtaposition (or `*`), sums with `+` and `-`,
//! and parentheses group sub-expressions.

use num_complex::Complex64;

use crate::graded::GradedOperator;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Imag(f64),
    Gen(char, i64),
    Ident,
    Plus,
    Minus,
    Star,
    Open,
    Close,
}

fn lex(src: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '(' => {
                out.push(Token::Open);
                i += 1;
            }
            ')' => {
                out.push(Token::Close);
                i += 1;
            }
            'I' => {
                out.push(Token::Ident);
                i += 1;
            }
            'i' => {
                out.push(Token::Imag(1.0));
                i += 1;
            }
            'X' | 'Y' | 'Z' => {
                let close = chars[i..]
                    .iter()
                    .position(|&d| d == ')')
                    .ok_or_else(|| format!("unclosed {c}( at position {i}"))?;
                if chars.get(i + 1) != Some(&'(') {
                    return Err(format!("expected '(' after {c} at position {i}"));
                }
                let inner: String = chars[i + 2..i + close].iter().collect();
                let cell = inner
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| format!("bad cell index '{inner}' at position {i}"))?;
                out.push(Token::Gen(c, cell));
                i += close + 1;
            }
            d if d.is_ascii_digit() || d == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let v = text.parse::<f64>().map_err(|_| format!("bad number '{text}'"))?;
                if chars.get(i) == Some(&'i') {
                    out.push(Token::Imag(v));
                    i += 1;
                } else {
                    out.push(Token::Num(v));
                }
            }
            other => return Err(format!("unexpected character '{other}' at position {i}")),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    /// Consumes a run of `+`/`-` and returns the resulting sign.
    fn signs(&mut self) -> f64 {
        let mut sign = 1.0;
        while let Some(t @ (Token::Plus | Token::Minus)) = self.peek() {
            if *t == Token::Minus {
                sign = -sign;
            }
            self.pos += 1;
        }
        sign
    }

    fn sum(&mut self) -> Result<GradedOperator, String> {
        let sign = self.signs();
        let mut acc = self.product()?.scale_real(sign);
        while let Some(Token::Plus | Token::Minus) = self.peek() {
            let sign = self.signs();
            acc = acc + self.product()?.scale_real(sign);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<GradedOperator, String> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Token::Plus | Token::Minus | Token::Close) | None => return Ok(acc),
                _ => acc = &acc * &self.factor()?,
            }
        }
    }

    fn factor(&mut self) -> Result<GradedOperator, String> {
        let tok = self.peek().cloned().ok_or("unexpected end of expression")?;
        self.pos += 1;
        Ok(match tok {
            Token::Num(v) => GradedOperator::scalar(Complex64::new(v, 0.0)),
            Token::Imag(v) => GradedOperator::scalar(Complex64::new(0.0, v)),
            Token::Ident => GradedOperator::identity(),
            Token::Gen('X', c) => GradedOperator::x(c),
            Token::Gen('Y', c) => GradedOperator::y(c),
            Token::Gen(_, c) => GradedOperator::z(c),
            Token::Open => {
                let inner = self.sum()?;
                if self.peek() != Some(&Token::Close) {
                    return Err("missing ')'".into());
                }
                self.pos += 1;
                inner
            }
            other => return Err(format!("unexpected {other:?}")),
        })
    }
}

/// Parses an operator expression.
pub fn parse_operator(src: &str) -> Result<GradedOperator, String> {
    let tokens = lex(src)?;
    if tokens.is_empty() {
        return Err("empty expression".into());
    }
    let mut p = Parser { tokens, pos: 0 };
    let op = p.sum()?;
    if p.pos != p.tokens.len() {
        return Err(format!("trailing input after token {}", p.pos));
    }
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn generators_and_products() {
        assert_eq!(parse_operator("X(0)").unwrap(), GradedOperator::x(0));
        assert_eq!(parse_operator("Y(-2)").unwrap(), GradedOperator::y(-2));
        assert_eq!(parse_operator("Z(3)").unwrap(), GradedOperator::z(3));
        let xy = &GradedOperator::x(0) * &GradedOperator::y(1);
        assert_eq!(parse_operator("X(0) Y(1)").unwrap(), xy);
        assert_eq!(parse_operator("X(0)*Y(1)").unwrap(), xy);
    }

    #[test]
    fn scalars_and_sums() {
        let op = parse_operator("(1+2i) I - 0.5i Z(0)").unwrap();
        let expected = GradedOperator::scalar(c(1.0, 2.0)) + GradedOperator::z(0).scale(c(0.0, -0.5));
        assert!(op.approx_eq(&expected, 1e-15));
        let op = parse_operator("-X(1) + -Y(1)").unwrap();
        assert_eq!(op, -GradedOperator::x(1) - GradedOperator::y(1));
        assert_eq!(parse_operator("2e-1 I").unwrap(), GradedOperator::scalar(c(0.2, 0.0)));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "X(", "X(a)", "Q(1)", "(X(0)", "X(0))", "+"] {
            assert!(parse_operator(bad).is_err(), "{bad}");
        }
    }
}
