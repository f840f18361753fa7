//! Text literals for residue elements, base-field elements and polynomials
//! in `X`.
//!
//! Residue literals are integer polynomials in `g`, e.g. `2*g + 1`.
//! Base-field literals are sums of products of factors:
//!
//! * an integer, read as an exact integer of `K`;
//! * `g` or `g^n`, the exact class of the generator;
//! * `pi` or `pi^n`, the uniformizer;
//! * `( ... )` containing only integers and `g`: the Teichmüller
//!   representative of that residue element;
//! * `( ... )` containing `pi` or `X`: ordinary grouping;
//! * `O(pi^k)`: a whole term declaring that the value is known modulo `pi^k`.
//!
//! Polynomial expressions additionally allow `X` and `X^n` factors.
//! Rendering produces `(a_0)*pi^0 + (a_1)*pi^1 + ...` from Teichmüller digits.

use std::collections::BTreeMap;

use crate::local_field::{KElem, LocalField};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Caret,
    Star,
    Plus,
    Minus,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let v = text.parse::<u64>().map_err(|_| format!("integer `{text}` too large"))?;
                out.push(Tok::Int(v));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Factor {
    Int(u64),
    G(u32),
    Pi(u32),
    X(u32),
    Big(u32),
    Group(Box<Expr>, u32),
}

/// Signed terms, each a product of factors.
#[derive(Clone, Debug)]
struct Expr(Vec<(bool, Vec<Factor>)>);

impl Expr {
    fn mentions_local(&self) -> bool {
        self.0.iter().any(|(_, fs)| {
            fs.iter().any(|f| match f {
                Factor::Pi(_) | Factor::X(_) | Factor::Big(_) => true,
                Factor::Group(e, _) => e.mentions_local(),
                _ => false,
            })
        })
    }
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }
    fn exponent(&mut self) -> Result<u32, String> {
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Int(v)) => u32::try_from(v).map_err(|_| "exponent too large".to_string()),
                _ => Err("expected integer exponent after `^`".into()),
            }
        } else {
            Ok(1)
        }
    }
    fn expr(&mut self) -> Result<Expr, String> {
        let mut terms = Vec::new();
        let mut negative = false;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            negative = true;
        } else if self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
        }
        loop {
            terms.push((negative, self.term()?));
            match self.peek() {
                Some(Tok::Plus) => negative = false,
                Some(Tok::Minus) => negative = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(Expr(terms))
    }
    fn term(&mut self) -> Result<Vec<Factor>, String> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(factors)
    }
    fn factor(&mut self) -> Result<Factor, String> {
        match self.next() {
            Some(Tok::Int(v)) => Ok(Factor::Int(v)),
            Some(Tok::Ident(name)) => match name.as_str() {
                "g" => Ok(Factor::G(self.exponent()?)),
                "pi" => Ok(Factor::Pi(self.exponent()?)),
                "X" => Ok(Factor::X(self.exponent()?)),
                "O" => {
                    if self.next() != Some(Tok::LParen) {
                        return Err("expected `(` after `O`".into());
                    }
                    match self.next() {
                        Some(Tok::Ident(s)) if s == "pi" => {}
                        _ => return Err("expected `pi` inside `O(...)`".into()),
                    }
                    let e = self.exponent()?;
                    if self.next() != Some(Tok::RParen) {
                        return Err("expected `)` closing `O(...)`".into());
                    }
                    Ok(Factor::Big(e))
                }
                other => Err(format!("unknown symbol `{other}`")),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err("unbalanced parentheses".into());
                }
                Ok(Factor::Group(Box::new(inner), self.exponent()?))
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of input".into()),
        }
    }
}

fn parse_expr(s: &str) -> Result<Expr, String> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err("empty literal".into());
    }
    let mut parser = Parser { toks, pos: 0 };
    let e = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(format!("trailing input at token {}", parser.pos));
    }
    Ok(e)
}

// ---- integer polynomials in g over F_p (no reduction by a modulus) ----

fn gp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn gp_add(a: &mut Vec<u64>, b: &[u64], p: u64, negative: bool) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (i, &y) in b.iter().enumerate() {
        let y = if negative { (p - y) % p } else { y };
        a[i] = (a[i] + y) % p;
    }
}

fn gp_pow(a: &[u64], e: u32, p: u64) -> Vec<u64> {
    (0..e).fold(vec![1], |acc, _| gp_mul(&acc, a, p))
}

fn eval_g(e: &Expr, p: u64) -> Result<Vec<u64>, String> {
    let mut acc = vec![0u64];
    for (neg, factors) in &e.0 {
        let mut prod = vec![1u64];
        for f in factors {
            let v = match f {
                Factor::Int(v) => vec![v % p],
                Factor::G(n) => {
                    let mut v = vec![0u64; *n as usize + 1];
                    v[*n as usize] = 1;
                    v
                }
                Factor::Group(inner, n) => gp_pow(&eval_g(inner, p)?, *n, p),
                _ => return Err("only integers and `g` are allowed in a residue literal".into()),
            };
            prod = gp_mul(&prod, &v, p);
        }
        gp_add(&mut acc, &prod, p, *neg);
    }
    while acc.len() > 1 && *acc.last().unwrap() == 0 {
        acc.pop();
    }
    Ok(acc)
}

/// Parses an integer polynomial in `g` and reduces its coefficients mod `p`
/// (constant term first).
pub fn parse_g_poly(s: &str, p: u64) -> Result<Vec<u64>, String> {
    eval_g(&parse_expr(s)?, p)
}

/// Renders `sum c_i var^i` with the highest power first, e.g. `2*g + 1`.
pub fn render_poly_in(coeffs: &[u64], var: &str) -> String {
    let mut parts = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        parts.push(match (c, mono.is_empty()) {
            (_, true) => c.to_string(),
            (1, false) => mono,
            (_, false) => format!("{c}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

// ---- polynomials in X over K ----

/// A polynomial in `X` over `K` as a sparse map exponent -> coefficient, with
/// an overall precision cap from `O(pi^k)` terms.
#[derive(Clone, Debug)]
pub struct XPoly {
    pub terms: BTreeMap<u32, KElem>,
    pub cap: Option<u32>,
}

impl XPoly {
    fn constant(c: KElem) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(0, c);
        XPoly { terms, cap: None }
    }
    fn mul(&self, other: &XPoly) -> XPoly {
        let mut terms: BTreeMap<u32, KElem> = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                let prod = a.mul(b);
                terms
                    .entry(i + j)
                    .and_modify(|e| *e = e.add(&prod))
                    .or_insert(prod);
            }
        }
        XPoly { terms, cap: min_cap(self.cap, other.cap) }
    }
    fn add(&mut self, other: XPoly, negative: bool) {
        for (i, b) in other.terms {
            let b = if negative { b.neg() } else { b };
            match self.terms.get_mut(&i) {
                Some(e) => *e = e.add(&b),
                None => {
                    self.terms.insert(i, b);
                }
            }
        }
        self.cap = min_cap(self.cap, other.cap);
    }
}

fn min_cap(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn eval_x(e: &Expr, k: &LocalField, allow_x: bool) -> Result<XPoly, String> {
    let mut acc = XPoly { terms: BTreeMap::new(), cap: None };
    for (neg, factors) in &e.0 {
        if let [Factor::Big(m)] = factors.as_slice() {
            acc.cap = min_cap(acc.cap, Some(*m));
            continue;
        }
        let mut prod = XPoly::constant(k.one());
        for f in factors {
            let v = match f {
                Factor::Int(v) => {
                    let v = i64::try_from(*v).map_err(|_| "integer too large".to_string())?;
                    XPoly::constant(k.from_int(v))
                }
                Factor::G(n) => XPoly::constant(k.naive_lift(&k.residue().generator()).pow(*n as u64)),
                Factor::Pi(n) => XPoly::constant(k.pi_pow(*n)),
                Factor::X(n) => {
                    if !allow_x {
                        return Err("`X` is not allowed in a base-field literal".into());
                    }
                    let mut terms = BTreeMap::new();
                    terms.insert(*n, k.one());
                    XPoly { terms, cap: None }
                }
                Factor::Big(_) => return Err("`O(...)` must stand alone as a term".into()),
                Factor::Group(inner, n) => {
                    let base = if inner.mentions_local() {
                        eval_x(inner, k, allow_x)?
                    } else {
                        let coeffs = eval_g(inner, k.p())?;
                        XPoly::constant(k.teich(&k.residue().from_poly(&coeffs)))
                    };
                    (0..*n).fold(XPoly::constant(k.one()), |a, _| a.mul(&base))
                }
            };
            prod = prod.mul(&v);
        }
        acc.add(prod, *neg);
    }
    if let Some(cap) = acc.cap {
        for v in acc.terms.values_mut() {
            *v = v.truncate(cap);
        }
    }
    Ok(acc)
}

/// Parses a base-field literal.
pub fn parse_k(s: &str, k: &LocalField) -> Result<KElem, String> {
    let poly = eval_x(&parse_expr(s)?, k, false)?;
    let base = match poly.cap {
        Some(cap) => k.zero().truncate(cap),
        None => k.zero(),
    };
    Ok(poly.terms.get(&0).map_or(base.clone(), |v| v.add(&base)))
}

/// Parses a polynomial in `X` over `K`.
pub fn parse_x_poly(s: &str, k: &LocalField) -> Result<XPoly, String> {
    eval_x(&parse_expr(s)?, k, true)
}

/// Renders an element through its Teichmüller digits.
pub fn render_k(x: &KElem) -> String {
    let mut parts: Vec<String> =
        x.teich_digits().into_iter().map(|(i, a)| format!("({a})*pi^{i}")).collect();
    if parts.is_empty() && x.prec() >= x.field().precision() {
        return "0".into();
    }
    if x.prec() < x.field().precision() {
        parts.push(format!("O(pi^{})", x.prec()));
    }
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::Model;
    use crate::residue_field::ResidueField;

    fn q9(n: u32) -> LocalField {
        LocalField::new(Model::MixedUnramified, ResidueField::new(3, 2, None).unwrap(), n).unwrap()
    }

    #[test]
    fn residue_literals() {
        assert_eq!(parse_g_poly("2*g + 1", 3).unwrap(), vec![1, 2]);
        assert_eq!(parse_g_poly("g^2+1", 3).unwrap(), vec![1, 0, 1]);
        assert_eq!(parse_g_poly("-g", 3).unwrap(), vec![0, 2]);
        assert_eq!(parse_g_poly("(g + 1)^2", 3).unwrap(), vec![1, 2, 1]);
        assert_eq!(parse_g_poly("0", 3).unwrap(), vec![0]);
        assert!(parse_g_poly("pi", 3).is_err());
        assert!(parse_g_poly("2 *", 3).is_err());
        assert_eq!(render_poly_in(&[1, 2], "g"), "2*g + 1");
        assert_eq!(render_poly_in(&[0, 0, 1], "g"), "g^2");
        assert_eq!(render_poly_in(&[0, 0], "g"), "0");
    }

    #[test]
    fn base_field_literals_round_trip() {
        let k = q9(6);
        let x = parse_k("(2*g + 1)*pi^0 + (1)*pi^2", &k).unwrap();
        assert_eq!(render_k(&x), "(2*g + 1)*pi^0 + (1)*pi^2");
        assert_eq!(parse_k(&render_k(&x), &k).unwrap(), x);
        let three = parse_k("3", &k).unwrap();
        assert_eq!(three, k.pi());
        // a parenthesised residue literal is a Teichmüller digit, not an integer
        assert_eq!(parse_k("-3*(1 + 3)", &k).unwrap(), k.from_int(-3));
        assert_eq!(parse_k("-3*(1 + pi)", &k).unwrap(), k.from_int(-12));
        let y = parse_k("pi + O(pi^3)", &k).unwrap();
        assert_eq!(y.prec(), 3);
        assert_eq!(render_k(&y), "(1)*pi^1 + O(pi^3)");
        assert_eq!(parse_k(&render_k(&y), &k).unwrap(), y);
        assert_eq!(render_k(&k.zero()), "0");
        assert_eq!(render_k(&k.zero().truncate(2)), "O(pi^2)");
        assert!(parse_k("X", &k).is_err());
    }

    #[test]
    fn x_expressions() {
        let k = q9(6);
        let e = parse_x_poly("X + (2*g)*X^3", &k).unwrap();
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.terms[&1], k.one());
        assert_eq!(e.terms[&3], k.teich(&k.residue().parse("2*g").unwrap()));
        let sq = parse_x_poly("(X + pi*X^2)^2", &k).unwrap();
        assert_eq!(sq.terms[&3], k.from_int(6));
    }
}
