//! Exact rational arithmetic for numeric domains.

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, Zero};

use super::LogicError;

pub type Rational = Ratio<i128>;

/// Parses `-12`, `2.5` or `3/4` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let value = if let Some((n, d)) = body.split_once('/') {
        if !digits(n) || !digits(d) {
            return None;
        }
        let d: i128 = d.parse().ok()?;
        if d == 0 {
            return None;
        }
        Rational::new(n.parse().ok()?, d)
    } else if let Some((int, frac)) = body.split_once('.') {
        if !digits(int) || !digits(frac) {
            return None;
        }
        let scale = 10i128.checked_pow(frac.len() as u32)?;
        let numer = int.parse::<i128>().ok()?.checked_mul(scale)?.checked_add(frac.parse().ok()?)?;
        Rational::new(numer, scale)
    } else {
        if !digits(body) {
            return None;
        }
        Rational::from_integer(body.parse().ok()?)
    };
    Some(if neg { -value } else { value })
}

/// Checked rational operations with a bound on numerator and denominator.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Arithmetic {
    pub bound: i128,
}

impl Arithmetic {
    fn check(&self, r: Option<Rational>) -> Result<Rational, LogicError> {
        let r = r.ok_or(LogicError::EvaluationOverflow)?;
        if r.numer().abs() > self.bound || r.denom().abs() > self.bound {
            return Err(LogicError::EvaluationOverflow);
        }
        Ok(r)
    }

    fn pow(&self, base: Rational, exp: u32) -> Result<Rational, LogicError> {
        (0..exp).try_fold(Rational::from_integer(1), |acc, _| self.check(acc.checked_mul(&base)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArithExpr {
    Num(Rational),
    Param(usize),
    Neg(Box<ArithExpr>),
    Add(Box<ArithExpr>, Box<ArithExpr>),
    Sub(Box<ArithExpr>, Box<ArithExpr>),
    Mul(Box<ArithExpr>, Box<ArithExpr>),
    Div(Box<ArithExpr>, Box<ArithExpr>),
    Pow(Box<ArithExpr>, u32),
}

impl ArithExpr {
    /// Parses `+ - * / ^` expressions over the named parameters.
    pub fn parse(text: &str, params: &[String]) -> Result<Self, LogicError> {
        let mut p = ExprParser { chars: text.char_indices().collect(), pos: 0, params };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("end of expression"));
        }
        Ok(e)
    }

    pub(crate) fn eval(&self, args: &[Rational], arith: &Arithmetic) -> Result<Rational, LogicError> {
        let bin = |a: &ArithExpr, b: &ArithExpr| -> Result<(Rational, Rational), LogicError> {
            Ok((a.eval(args, arith)?, b.eval(args, arith)?))
        };
        match self {
            ArithExpr::Num(r) => arith.check(Some(*r)),
            ArithExpr::Param(i) => Ok(args[*i]),
            ArithExpr::Neg(a) => arith.check(Some(-a.eval(args, arith)?)),
            ArithExpr::Add(a, b) => {
                let (x, y) = bin(a, b)?;
                arith.check(x.checked_add(&y))
            }
            ArithExpr::Sub(a, b) => {
                let (x, y) = bin(a, b)?;
                arith.check(x.checked_sub(&y))
            }
            ArithExpr::Mul(a, b) => {
                let (x, y) = bin(a, b)?;
                arith.check(x.checked_mul(&y))
            }
            ArithExpr::Div(a, b) => {
                let (x, y) = bin(a, b)?;
                if y.is_zero() {
                    return Err(LogicError::Evaluation("division by zero".into()));
                }
                arith.check(x.checked_div(&y))
            }
            ArithExpr::Pow(a, n) => arith.pow(a.eval(args, arith)?, *n),
        }
    }
}

struct ExprParser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    params: &'a [String],
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or_else(|| self.chars.last().map_or(0, |&(i, c)| i + c.len_utf8()), |&(i, _)| i)
    }

    fn error(&self, expected: &str) -> LogicError {
        LogicError::Syntax {
            position: self.offset(),
            expected: expected.into(),
            found: self.peek().map_or("end of input".into(), |c| format!("`{c}`")),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ArithExpr, LogicError> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = ArithExpr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = ArithExpr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<ArithExpr, LogicError> {
        let mut lhs = self.power()?;
        loop {
            if self.eat('*') {
                lhs = ArithExpr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else if self.eat('/') {
                lhs = ArithExpr::Div(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn power(&mut self) -> Result<ArithExpr, LogicError> {
        let base = self.unary()?;
        if self.eat('^') {
            self.skip_ws();
            let digits = self.take_while(|c| c.is_ascii_digit());
            let n = digits.parse().map_err(|_| self.error("integer exponent"))?;
            return Ok(ArithExpr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<ArithExpr, LogicError> {
        if self.eat('-') {
            return Ok(ArithExpr::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while self.peek().is_some_and(&pred) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().map(|&(_, c)| c).collect()
    }

    fn primary(&mut self) -> Result<ArithExpr, LogicError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("`)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let text = self.take_while(|c| c.is_ascii_digit() || c == '.');
                parse_rational(&text).map(ArithExpr::Num).ok_or_else(|| self.error("number"))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                self.params.iter().position(|p| *p == name).map(ArithExpr::Param).ok_or(LogicError::UnknownSymbol(name))
            }
            _ => Err(self.error("number, parameter or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn literals() {
        assert_eq!(parse_rational("12"), Some(r(12, 1)));
        assert_eq!(parse_rational("-2.5"), Some(r(-5, 2)));
        assert_eq!(parse_rational("6/8"), Some(r(3, 4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1."), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn evaluates_sum_of_squares() {
        let params = vec!["a".to_string(), "b".to_string()];
        let e = ArithExpr::parse("a*a + b^2", &params).unwrap();
        let arith = Arithmetic { bound: i128::MAX };
        assert_eq!(e.eval(&[r(3, 1), r(4, 1)], &arith).unwrap(), r(25, 1));
        let e = ArithExpr::parse("-(a - b) / 2", &params).unwrap();
        assert_eq!(e.eval(&[r(3, 1), r(4, 1)], &arith).unwrap(), r(1, 2));
    }

    #[test]
    fn overflow_and_division_by_zero() {
        let params = vec!["a".to_string()];
        let arith = Arithmetic { bound: 1000 };
        let e = ArithExpr::parse("a^4", &params).unwrap();
        assert_eq!(e.eval(&[r(10, 1)], &arith), Err(LogicError::EvaluationOverflow));
        let e = ArithExpr::parse("1 / a", &params).unwrap();
        assert!(matches!(e.eval(&[r(0, 1)], &arith), Err(LogicError::Evaluation(_))));
    }

    #[test]
    fn rejects_unknown_parameter() {
        assert_eq!(ArithExpr::parse("a + z", &["a".into()]), Err(LogicError::UnknownSymbol("z".into())));
        assert!(matches!(ArithExpr::parse("a +", &["a".into()]), Err(LogicError::Syntax { .. })));
    }
}
