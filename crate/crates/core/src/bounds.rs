//! Symbolic upper bounds from the inductive proofs, evaluated exactly with
//! big integers against a table of certified small Ramsey numbers.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::count_types;

/// Results larger than this many bits stay symbolic.
const MAX_BITS: u64 = 1 << 20;
/// Largest length argument of `types(..)` computed exactly.
const MAX_TYPE_LEN: u64 = 4096;

pub type Expr = Rc<BoundExpr>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundExpr {
    Const(BigUint),
    /// Classical Ramsey number `R(k, l, r)`.
    Ramsey(Expr, Expr, Expr),
    /// Milliken-Taylor number `MT_d(m, r)`, arguments `d, m, r`.
    Mt(Expr, Expr, Expr),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Max(Vec<Expr>),
    Pow(Expr, Expr),
    Binom(Expr, Expr),
    /// Number of d-tuple types over `k` of total length at most `m`; arguments `k, m, d`.
    Types(Expr, Expr, Expr),
    /// A named quantity with its defining expression.
    Named { name: String, args: Vec<(String, Expr)>, body: Expr },
}

fn c(n: impl Into<BigUint>) -> Expr {
    Rc::new(BoundExpr::Const(n.into()))
}

fn cu(n: usize) -> Expr {
    c(BigUint::from(n))
}

fn named(name: &str, args: Vec<(&str, Expr)>, body: Expr) -> Expr {
    Rc::new(BoundExpr::Named {
        name: name.into(),
        args: args.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        body,
    })
}

impl BoundExpr {
    fn write_list(f: &mut fmt::Formatter<'_>, name: &str, items: &[&Expr]) -> fmt::Result {
        write!(f, "{name}(")?;
        for (i, e) in items.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }

    /// One-line form with named bodies elided.
    pub fn summary(&self) -> String {
        match self {
            BoundExpr::Named { name, args, .. } => {
                let a: Vec<String> = args.iter().map(|(k, v)| format!("{k}={}", v.summary())).collect();
                format!("{name}({})", a.join(","))
            }
            BoundExpr::Const(n) => n.to_string(),
            BoundExpr::Ramsey(a, b, r) => format!("R({},{},{})", a.summary(), b.summary(), r.summary()),
            BoundExpr::Mt(a, b, r) => format!("MT({},{},{})", a.summary(), b.summary(), r.summary()),
            BoundExpr::Add(v) => format!("add({})", v.iter().map(|e| e.summary()).collect::<Vec<_>>().join(",")),
            BoundExpr::Mul(v) => format!("mul({})", v.iter().map(|e| e.summary()).collect::<Vec<_>>().join(",")),
            BoundExpr::Max(v) => format!("max({})", v.iter().map(|e| e.summary()).collect::<Vec<_>>().join(",")),
            BoundExpr::Pow(a, b) => format!("pow({},{})", a.summary(), b.summary()),
            BoundExpr::Binom(a, b) => format!("binom({},{})", a.summary(), b.summary()),
            BoundExpr::Types(a, b, d) => format!("types({},{},{})", a.summary(), b.summary(), d.summary()),
        }
    }
}

/// Prefix notation; named quantities carry their body in brackets.
impl fmt::Display for BoundExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundExpr::Const(n) => write!(f, "{n}"),
            BoundExpr::Ramsey(a, b, r) => Self::write_list(f, "R", &[a, b, r]),
            BoundExpr::Mt(a, b, r) => Self::write_list(f, "MT", &[a, b, r]),
            BoundExpr::Add(v) => Self::write_list(f, "add", &v.iter().collect::<Vec<_>>()),
            BoundExpr::Mul(v) => Self::write_list(f, "mul", &v.iter().collect::<Vec<_>>()),
            BoundExpr::Max(v) => Self::write_list(f, "max", &v.iter().collect::<Vec<_>>()),
            BoundExpr::Pow(a, b) => Self::write_list(f, "pow", &[a, b]),
            BoundExpr::Binom(a, b) => Self::write_list(f, "binom", &[a, b]),
            BoundExpr::Types(a, b, d) => Self::write_list(f, "types", &[a, b, d]),
            BoundExpr::Named { name, args, body } => {
                write!(f, "{name}(")?;
                for (i, (k, v)) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{k}={v}")?;
                }
                write!(f, ")[{body}]")
            }
        }
    }
}

// ---------------------------------------------------------------- parsing

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in bound expression", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {ch:?}")))
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while let Some(ch) = self.src[self.pos..].chars().next() {
            if !pred(ch) {
                break;
            }
            self.pos += ch.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn expr(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(ch) if ch.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                Ok(c(digits.parse::<BigUint>().map_err(|_| self.err("bad number"))?))
            }
            Some(ch) if ch.is_ascii_alphabetic() => {
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                self.expect('(')?;
                // Named arguments look like `ident=`.
                let save = self.pos;
                let is_named = {
                    let ident = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                    let eq = !ident.is_empty() && self.peek() == Some('=');
                    self.pos = save;
                    eq
                };
                if is_named {
                    let mut args = Vec::new();
                    loop {
                        let key = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_').to_string();
                        self.expect('=')?;
                        args.push((key, self.expr()?));
                        if self.peek() == Some(',') {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                    self.expect(')')?;
                    self.expect('[')?;
                    let body = self.expr()?;
                    self.expect(']')?;
                    return Ok(Rc::new(BoundExpr::Named { name: name.to_string(), args, body }));
                }
                let mut items = Vec::new();
                if self.peek() != Some(')') {
                    loop {
                        items.push(self.expr()?);
                        if self.peek() == Some(',') {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(')')?;
                let arity = |n: usize| -> Result<()> {
                    if items.len() == n {
                        Ok(())
                    } else {
                        Err(Error::Parse(format!("{name} takes {n} arguments, got {}", items.len())))
                    }
                };
                let node = match name {
                    "R" => {
                        arity(3)?;
                        BoundExpr::Ramsey(items[0].clone(), items[1].clone(), items[2].clone())
                    }
                    "MT" => {
                        arity(3)?;
                        BoundExpr::Mt(items[0].clone(), items[1].clone(), items[2].clone())
                    }
                    "types" => {
                        arity(3)?;
                        BoundExpr::Types(items[0].clone(), items[1].clone(), items[2].clone())
                    }
                    "pow" => {
                        arity(2)?;
                        BoundExpr::Pow(items[0].clone(), items[1].clone())
                    }
                    "binom" => {
                        arity(2)?;
                        BoundExpr::Binom(items[0].clone(), items[1].clone())
                    }
                    "add" | "mul" | "max" if !items.is_empty() => match name {
                        "add" => BoundExpr::Add(items),
                        "mul" => BoundExpr::Mul(items),
                        _ => BoundExpr::Max(items),
                    },
                    _ => return Err(Error::Parse(format!("unknown operator {name:?}"))),
                };
                Ok(Rc::new(node))
            }
            _ => Err(self.err("expected a number or an operator")),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

// ---------------------------------------------------------------- bounds

/// `G_d(k, l, m, r)`: Milliken-Taylor at `k = 1`, otherwise the
/// type-homogeneity bound at `n'(2l - 1)` with `n' = G_d(k-1, l-1, m, r)`.
pub fn bound_g(d: usize, k: usize, l: usize, m: usize, r: usize) -> Result<Expr> {
    if d < 1 || d > m || k < 1 || k > l {
        return Err(Error::InvalidParameter(format!("need 1 <= d <= m and 1 <= k <= l (d={d} k={k} l={l} m={m})")));
    }
    let args = vec![("d", cu(d)), ("k", cu(k)), ("l", cu(l)), ("m", cu(m)), ("r", cu(r))];
    let body = if k == 1 {
        Rc::new(BoundExpr::Mt(cu(d), cu(m), cu(r)))
    } else {
        let inner = bound_g(d, k - 1, l - 1, m, r)?;
        bound_t_expr(d, k, Rc::new(BoundExpr::Mul(vec![inner, cu(2 * l - 1)])), cu(r))
    };
    Ok(named("G", args, body))
}

/// `T_d(k, m, r) = MT_m(2m - d, r^|types|)`.
pub fn bound_t(d: usize, k: usize, m: usize, r: usize) -> Result<Expr> {
    if d < 1 || d > m || k < 1 {
        return Err(Error::InvalidParameter(format!("need 1 <= d <= m and k >= 1 (d={d} k={k} m={m})")));
    }
    Ok(bound_t_expr(d, k, cu(m), cu(r)))
}

fn bound_t_expr(d: usize, k: usize, m: Expr, r: Expr) -> Expr {
    let two_m_minus_d = Rc::new(BoundExpr::Add(vec![m.clone(), m.clone()]));
    let length = sub_const(two_m_minus_d, d);
    let alphabet = Rc::new(BoundExpr::Pow(r.clone(), Rc::new(BoundExpr::Types(cu(k), m.clone(), cu(d)))));
    named(
        "T",
        vec![("d", cu(d)), ("k", cu(k)), ("m", m.clone()), ("r", r)],
        Rc::new(BoundExpr::Mt(m, length, alphabet)),
    )
}

/// `e - d`, kept as an addition with a folded constant when possible.
fn sub_const(e: Expr, d: usize) -> Expr {
    // Expressions have no subtraction; `2m - d` with `m >= d` is `m + (m - d)`,
    // written as `add(m, m)` lowered by constant folding at evaluation time.
    Rc::new(BoundExpr::Named {
        name: "minus".into(),
        args: vec![("by".into(), cu(d))],
        body: e,
    })
}

/// `S(m, k_1..k_m, l_1..l_m, r)` by the double induction on `m` and on the
/// last height.
pub fn bound_s(k: &[usize], l: &[usize], r: usize) -> Result<Expr> {
    if k.is_empty() || k.len() != l.len() || k.iter().zip(l).any(|(a, b)| a > b) {
        return Err(Error::InvalidParameter("need equal-length k, l with k_i <= l_i".into()));
    }
    Ok(s_expr(k, &l.iter().map(|&x| cu(x)).collect::<Vec<_>>(), cu(r)))
}

fn s_expr(k: &[usize], l: &[Expr], r: Expr) -> Expr {
    let m = k.len();
    let kp = k[m - 1];
    let mut args = vec![("m", cu(m))];
    let kn: Vec<String> = (1..=m).map(|i| format!("k{i}")).collect();
    let ln: Vec<String> = (1..=m).map(|i| format!("l{i}")).collect();
    let mut named_args: Vec<(String, Expr)> = args.drain(..).map(|(a, b)| (a.to_string(), b)).collect();
    for i in 0..m {
        named_args.push((kn[i].clone(), cu(k[i])));
    }
    for i in 0..m {
        named_args.push((ln[i].clone(), l[i].clone()));
    }
    named_args.push(("r".into(), r.clone()));
    let body = if kp == 0 {
        if m == 1 {
            l[0].clone()
        } else {
            let rest = s_expr(&k[..m - 1], &l[..m - 1], r);
            Rc::new(BoundExpr::Max(vec![rest, l[m - 1].clone()]))
        }
    } else {
        let mut lower = k.to_vec();
        lower[m - 1] = kp - 1;
        let n1 = s_expr(&lower, l, r.clone());
        if m == 1 {
            Rc::new(BoundExpr::Ramsey(cu(kp), n1, r))
        } else {
            let n2 = s_expr(&k[..m - 1], &vec![n1.clone(); m - 1], r.clone());
            // Number of points of the first m-1 coordinates over [N''].
            let points = Rc::new(BoundExpr::Mul(
                k[..m - 1]
                    .iter()
                    .map(|&ki| {
                        Rc::new(BoundExpr::Add((0..=ki).map(|j| Rc::new(BoundExpr::Binom(n2.clone(), cu(j)))).collect()))
                    })
                    .collect(),
            ));
            let alpha = Rc::new(BoundExpr::Pow(r, points));
            Rc::new(BoundExpr::Max(vec![n2, Rc::new(BoundExpr::Ramsey(cu(kp), n1, alpha))]))
        }
    };
    Rc::new(BoundExpr::Named { name: "S".into(), args: named_args, body })
}

/// Number of splittings of `1..=m` into `d` consecutive nonempty intervals.
pub fn gamma_count(m: usize, d: usize) -> BigUint {
    if d < 1 || d > m {
        return BigUint::zero();
    }
    binom_big(&BigUint::from(m - 1), d - 1).unwrap_or_default()
}

/// `S_d = S(m, k, l, r^|Γ|)`.
pub fn bound_sd(k: &[usize], l: &[usize], d: usize, r: usize) -> Result<Expr> {
    let m = k.len();
    if d < 1 || d > m {
        return Err(Error::InvalidParameter(format!("need 1 <= d <= m (d={d}, m={m})")));
    }
    bound_s(k, l, 1)?;
    let colors = Rc::new(BoundExpr::Pow(cu(r), c(gamma_count(m, d))));
    let body = s_expr(k, &l.iter().map(|&x| cu(x)).collect::<Vec<_>>(), colors);
    let mut args: Vec<(&str, Expr)> = vec![("d", cu(d)), ("r", cu(r))];
    let ks = c(BigUint::from(m));
    args.push(("m", ks));
    Ok(named("Sd", args, body))
}

// ---------------------------------------------------------------- evaluation

/// Certified exact values keyed by `R(k,l,r)` / `MT(d,m,r)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactTable {
    pub entries: BTreeMap<String, TableEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub value: u64,
    pub certificate: String,
}

impl ExactTable {
    pub fn ramsey_key(k: &BigUint, l: &BigUint, r: &BigUint) -> String {
        format!("R({k},{l},{r})")
    }

    pub fn mt_key(d: &BigUint, m: &BigUint, r: &BigUint) -> String {
        format!("MT({d},{m},{r})")
    }

    pub fn insert(&mut self, key: String, value: u64, certificate: String) {
        self.entries.insert(key, TableEntry { value, certificate });
    }

    pub fn get(&self, key: &str) -> Option<u64> {
        self.entries.get(key).map(|e| e.value)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

/// Either an exact value or the partially evaluated expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evaluated {
    Exact(BigUint),
    Symbolic(Expr),
}

impl Evaluated {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Evaluated::Exact(n) => Some(n),
            Evaluated::Symbolic(_) => None,
        }
    }

    fn expr(&self) -> Expr {
        match self {
            Evaluated::Exact(n) => c(n.clone()),
            Evaluated::Symbolic(e) => e.clone(),
        }
    }
}

fn binom_big(n: &BigUint, k: usize) -> Option<BigUint> {
    if BigUint::from(k) > *n {
        return Some(BigUint::zero());
    }
    if k > 100_000 {
        return None;
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
        if acc.bits() > MAX_BITS {
            return None;
        }
    }
    Some(acc)
}

fn pow_big(b: &BigUint, e: &BigUint) -> Option<BigUint> {
    if b.is_zero() {
        return Some(if e.is_zero() { BigUint::one() } else { BigUint::zero() });
    }
    if b.is_one() {
        return Some(BigUint::one());
    }
    let e = e.to_u64()?;
    if e.checked_mul(b.bits())? > MAX_BITS {
        return None;
    }
    Some(num_traits::pow(b.clone(), e as usize))
}

/// Exact arithmetic; leaves missing from the table, and results too large
/// to hold, stay symbolic. Never approximates.
pub fn evaluate(expr: &Expr, table: &ExactTable) -> Evaluated {
    use BoundExpr::*;
    let ev = |e: &Expr| evaluate(e, table);
    let all = |v: &[Expr]| -> (Vec<Evaluated>, Option<Vec<BigUint>>) {
        let evs: Vec<Evaluated> = v.iter().map(ev).collect();
        let nums = evs.iter().map(|e| e.exact().cloned()).collect::<Option<Vec<_>>>();
        (evs, nums)
    };
    let residue = |node: BoundExpr| Evaluated::Symbolic(Rc::new(node));
    match expr.as_ref() {
        Const(n) => Evaluated::Exact(n.clone()),
        Add(v) | Mul(v) | Max(v) => {
            let (evs, nums) = all(v);
            let rebuilt: Vec<Expr> = evs.iter().map(Evaluated::expr).collect();
            match (expr.as_ref(), nums) {
                (Add(_), Some(n)) => Evaluated::Exact(n.into_iter().sum()),
                (Mul(_), Some(n)) => {
                    let mut acc = BigUint::one();
                    for x in n {
                        acc *= x;
                        if acc.bits() > MAX_BITS {
                            return residue(Mul(rebuilt));
                        }
                    }
                    Evaluated::Exact(acc)
                }
                (Max(_), Some(n)) => Evaluated::Exact(n.into_iter().max().unwrap()),
                (Add(_), None) => residue(Add(rebuilt)),
                (Mul(_), None) => residue(Mul(rebuilt)),
                _ => residue(Max(rebuilt)),
            }
        }
        Pow(b, e) => {
            let (eb, ee) = (ev(b), ev(e));
            if let (Some(x), Some(y)) = (eb.exact(), ee.exact()) {
                if let Some(v) = pow_big(x, y) {
                    return Evaluated::Exact(v);
                }
            }
            residue(Pow(eb.expr(), ee.expr()))
        }
        Binom(n, k) => {
            let (en, ek) = (ev(n), ev(k));
            if let (Some(x), Some(y)) = (en.exact(), ek.exact().and_then(|y| y.to_usize())) {
                if let Some(v) = binom_big(x, y) {
                    return Evaluated::Exact(v);
                }
            }
            residue(Binom(en.expr(), ek.expr()))
        }
        Types(k, m, d) => {
            let (ek, em, ed) = (ev(k), ev(m), ev(d));
            let small = |e: &Evaluated, cap: u64| e.exact().and_then(|x| x.to_u64()).filter(|&x| x <= cap);
            if let (Some(k), Some(m), Some(d)) = (small(&ek, 255), small(&em, MAX_TYPE_LEN), small(&ed, MAX_TYPE_LEN)) {
                return Evaluated::Exact(count_types(k as u8, m as usize, d as usize));
            }
            residue(Types(ek.expr(), em.expr(), ed.expr()))
        }
        Ramsey(k, l, r) | Mt(k, l, r) => {
            let (a, b, cc) = (ev(k), ev(l), ev(r));
            if let (Some(x), Some(y), Some(z)) = (a.exact(), b.exact(), cc.exact()) {
                let key = match expr.as_ref() {
                    Ramsey(..) => ExactTable::ramsey_key(x, y, z),
                    _ => ExactTable::mt_key(x, y, z),
                };
                if let Some(v) = table.get(&key) {
                    return Evaluated::Exact(BigUint::from(v));
                }
            }
            match expr.as_ref() {
                Ramsey(..) => residue(Ramsey(a.expr(), b.expr(), cc.expr())),
                _ => residue(Mt(a.expr(), b.expr(), cc.expr())),
            }
        }
        Named { name, args, body } => {
            let eb = ev(body);
            if name == "minus" {
                let by = args.iter().find(|(k, _)| k == "by").map(|(_, v)| ev(v));
                if let (Some(x), Some(Some(y))) = (eb.exact(), by.as_ref().map(|b| b.exact().cloned())) {
                    if *x >= y {
                        return Evaluated::Exact(x - y);
                    }
                }
            } else if let Evaluated::Exact(v) = eb {
                return Evaluated::Exact(v);
            }
            let args = args.iter().map(|(k, v)| (k.clone(), ev(v).expr())).collect();
            residue(Named { name: name.clone(), args, body: eb.expr() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(pairs: &[(&str, u64)]) -> ExactTable {
        let mut t = ExactTable::default();
        for (k, v) in pairs {
            t.insert(k.to_string(), *v, "test".into());
        }
        t
    }

    #[test]
    fn print_parse_round_trip() {
        for e in [
            bound_g(1, 1, 1, 2, 2).unwrap(),
            bound_g(1, 2, 2, 1, 1).unwrap(),
            bound_t(1, 1, 2, 3).unwrap(),
            bound_s(&[1, 1], &[2, 2], 2).unwrap(),
            bound_sd(&[1, 1, 1], &[1, 1, 1], 2, 2).unwrap(),
        ] {
            let text = e.to_string();
            assert_eq!(parse_expr(&text).unwrap(), e, "{text}");
        }
        assert!(parse_expr("pow(1)").is_err());
        assert!(parse_expr("add(1,2) x").is_err());
    }

    #[test]
    fn base_case_is_milliken_taylor() {
        let e = bound_g(1, 1, 1, 3, 2).unwrap();
        assert!(e.to_string().contains("MT(1,3,2)"));
        assert_eq!(evaluate(&e, &ExactTable::default()).exact(), None);
        let t = table(&[("MT(1,1,2)", 1)]);
        for l in 1..=3 {
            assert_eq!(evaluate(&bound_g(1, 1, l, 1, 2).unwrap(), &t).exact(), Some(&BigUint::from(1u8)));
        }
    }

    #[test]
    fn type_bound_example() {
        let e = bound_t(1, 1, 2, 5).unwrap();
        let t = table(&[("MT(2,3,5)", 42)]);
        assert_eq!(evaluate(&e, &t).exact(), Some(&BigUint::from(42u8)));
        // One-coloured second level: T_1(2, 3, 1).
        let e = bound_g(1, 2, 2, 1, 1).unwrap();
        let t = table(&[("MT(1,1,1)", 1), ("MT(3,5,1)", 5)]);
        assert_eq!(evaluate(&e, &t).exact(), Some(&BigUint::from(5u8)));
    }

    #[test]
    fn size_bounds() {
        assert_eq!(evaluate(&bound_s(&[0], &[4], 3).unwrap(), &ExactTable::default()).exact(), Some(&BigUint::from(4u8)));
        let t = table(&[("R(1,2,2)", 3)]);
        assert_eq!(evaluate(&bound_s(&[1], &[2], 2).unwrap(), &t).exact(), Some(&BigUint::from(3u8)));
        assert_eq!(gamma_count(3, 2), BigUint::from(2u8));
        assert_eq!(gamma_count(1, 1), BigUint::from(1u8));
        assert_eq!(evaluate(&bound_sd(&[1], &[2], 1, 2).unwrap(), &t).exact(), Some(&BigUint::from(3u8)));
    }

    #[test]
    fn huge_values_stay_symbolic() {
        let e = Rc::new(BoundExpr::Pow(cu(2), cu(1 << 30)));
        assert!(matches!(evaluate(&e, &ExactTable::default()), Evaluated::Symbolic(_)));
    }
}
