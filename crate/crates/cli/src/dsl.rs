//! Text syntax for slice functions.
//!
//! ```text
//! expr    := factor ('*' factor)*
//! factor  := 's'
//!          | 'poly:' list ('/' list)?
//!          | 'reg:' integer
//!          | 'coef-left:' clifford-json
//!          | 'coef-right:' clifford-json
//!          | 'sum:[' expr (',' expr)* ']'
//!          | 'sharp:(' expr ')'
//! list    := '[' number (',' number)* ']'
//! ```
//!
//! Polynomial coefficients are listed from the constant term up. A
//! `coef-left` constant `b` is a left slice function and multiplies its
//! intrinsic neighbours from the right (`g(s) b`); `coef-right` is the mirror
//! image (`a g(s)`).

use cliffspec::slice::{regularizer, Rational, SliceFunction};
use cliffspec::CliffordNum;

use crate::error::{CliError, CliResult};
use crate::formats::num_from_json;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    d: usize,
    limit: usize,
}

fn err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> CliResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(err(format!("expected '{tok}' at offset {} in \"{}\"", self.pos, self.src)))
        }
    }

    fn expr(&mut self) -> CliResult<SliceFunction> {
        let mut f = self.factor()?;
        while self.eat("*") {
            let g = self.factor()?;
            f = f.product(&g).map_err(|e| err(format!("invalid product: {e}")))?;
        }
        Ok(f)
    }

    fn factor(&mut self) -> CliResult<SliceFunction> {
        self.skip_ws();
        if self.eat("poly:") {
            let num = self.list()?;
            let den = if self.eat("/") { self.list()? } else { vec![1.0] };
            let g = Rational::new(num, den).map_err(|e| err(format!("invalid rational: {e}")))?;
            Ok(SliceFunction::intrinsic(self.d, g))
        } else if self.eat("reg:") {
            let m = self.integer()?;
            regularizer(self.d, m).map_err(|e| err(format!("invalid regularizer: {e}")))
        } else if self.eat("coef-left:") {
            let c = self.clifford()?;
            Ok(SliceFunction::left(Rational::constant(1.0), c))
        } else if self.eat("coef-right:") {
            let c = self.clifford()?;
            Ok(SliceFunction::right(c, Rational::constant(1.0)))
        } else if self.eat("sum:") {
            self.expect("[")?;
            let mut parts = vec![self.expr()?];
            while self.eat(",") {
                parts.push(self.expr()?);
            }
            self.expect("]")?;
            SliceFunction::sum(&parts).map_err(|e| err(format!("invalid sum: {e}")))
        } else if self.eat("sharp:") {
            self.expect("(")?;
            let f = self.expr()?;
            self.expect(")")?;
            Ok(f.sharp())
        } else if self.eat("s") {
            Ok(SliceFunction::intrinsic(self.d, Rational::power(1)))
        } else {
            Err(err(format!("unknown function term at offset {} in \"{}\"", self.pos, self.src)))
        }
    }

    fn list(&mut self) -> CliResult<Vec<f64>> {
        self.expect("[")?;
        let end = self.rest().find(']').ok_or_else(|| err("unterminated coefficient list"))?;
        let body = &self.rest()[..end];
        let values = body
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| err(format!("bad coefficient \"{}\"", t.trim()))))
            .collect::<CliResult<Vec<f64>>>()?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(err("coefficients must be finite"));
        }
        self.pos += end + 1;
        Ok(values)
    }

    fn integer(&mut self) -> CliResult<usize> {
        self.skip_ws();
        let digits = self.rest().chars().take_while(|c| c.is_ascii_digit()).count();
        let m = self.rest()[..digits].parse().map_err(|_| err("expected an integer"))?;
        self.pos += digits;
        Ok(m)
    }

    fn clifford(&mut self) -> CliResult<CliffordNum> {
        self.skip_ws();
        let mut stream = serde_json::Deserializer::from_str(self.rest()).into_iter::<serde_json::Value>();
        let value = match stream.next() {
            Some(Ok(v)) => v,
            _ => return Err(err(format!("expected a Clifford number object at offset {}", self.pos))),
        };
        self.pos += stream.byte_offset();
        let c = num_from_json(&value, self.limit)?;
        if c.d() != self.d {
            return Err(err(format!("coefficient has d = {}, operator has d = {}", c.d(), self.d)));
        }
        Ok(c)
    }
}

/// Parses `src` into a slice function over `R_d`.
pub fn parse_function(src: &str, d: usize, limit: usize) -> CliResult<SliceFunction> {
    let mut p = Parser { src, pos: 0, d, limit };
    let f = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(err(format!("trailing input \"{}\"", p.rest())));
    }
    Ok(f)
}
