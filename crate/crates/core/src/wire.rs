//! JSON encoding of scalars, vectors, operators, tensors and subspaces.
//! Parse errors carry a JSON pointer to the offending field.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::operators::{Extent, MatrixOperator, TailProfile};
use crate::padic::{sqrt_ext, sqrt_qp, ExtScalar, FieldConfig, NormValue, Qp};
use crate::spaces::Vector;
use crate::subspaces::Subspace;
use crate::tensor::Tensor;

fn child(ptr: &str, key: &str) -> String {
    format!("{ptr}/{}", key.replace('~', "~0").replace('/', "~1"))
}

fn index(ptr: &str, i: usize) -> String {
    format!("{ptr}/{i}")
}

fn field<'a>(v: &'a Value, key: &str, ptr: &str) -> Result<&'a Value> {
    let obj = v.as_object().ok_or_else(|| Error::parse(ptr, "expected an object"))?;
    obj.get(key).ok_or_else(|| Error::parse(child(ptr, key), "missing field"))
}

fn array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(ptr, "expected an array"))
}

fn usize_of(v: &Value, ptr: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| Error::parse(ptr, "expected a non-negative integer"))
}

fn rational_literal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (d != BigInt::from(0)).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

fn power_of_p(s: &str) -> Option<i64> {
    s.trim().strip_prefix("p^")?.trim().parse().ok()
}

/// Scalar literal of Q_p: `n`, `n/d`, `p^k*(d0,d1,...)`, `O(p^k)` or `sqrt(<lit>)`.
pub fn parse_qp_literal(cfg: FieldConfig, s: &str) -> std::result::Result<Qp, String> {
    let s = s.trim();
    if let Some(r) = rational_literal(s) {
        return Ok(cfg.qp_rational(r));
    }
    if let Some(inner) = s.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
        let k = power_of_p(inner).ok_or_else(|| format!("bad precision literal {s:?}"))?;
        return Ok(Qp::zero_at(cfg.p(), cfg.precision(), k));
    }
    if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let x = parse_qp_literal(cfg, inner)?;
        return sqrt_qp(&x).map_err(|e| e.to_string());
    }
    if let Some((head, digits)) = s.split_once('*') {
        let k = power_of_p(head).ok_or_else(|| format!("bad digit literal {s:?}"))?;
        let body = digits
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| format!("digits must be parenthesized in {s:?}"))?;
        let ds = body
            .split(',')
            .map(|d| d.trim().parse::<u32>().ok().filter(|&d| d < cfg.p()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| format!("digits must lie in [0, {}) in {s:?}", cfg.p()))?;
        if ds.is_empty() {
            return Err(format!("empty digit list in {s:?}"));
        }
        return Ok(Qp::from_digits(cfg.p(), cfg.precision(), k, &ds));
    }
    Err(format!("unrecognized scalar literal {s:?}"))
}

pub fn parse_qp(cfg: FieldConfig, v: &Value, ptr: &str) -> Result<Qp> {
    match v {
        Value::String(s) => parse_qp_literal(cfg, s).map_err(|m| Error::parse(ptr, m)),
        Value::Number(n) => n
            .as_i64()
            .map(|n| cfg.qp(n))
            .ok_or_else(|| Error::parse(ptr, "numbers must be integers; use \"n/d\" for fractions")),
        _ => Err(Error::parse(ptr, "expected a scalar literal")),
    }
}

/// Element of the extension: `{"a": <lit>, "b": <lit>}` for a + b√μ, or a
/// bare literal of Q_p. A bare `sqrt(<lit>)` takes the root in the extension.
pub fn parse_scalar(cfg: FieldConfig, v: &Value, ptr: &str) -> Result<ExtScalar> {
    match v {
        Value::Object(_) => {
            let a = parse_qp(cfg, field(v, "a", ptr)?, &child(ptr, "a"))?;
            let b = match v.get("b") {
                Some(b) => parse_qp(cfg, b, &child(ptr, "b"))?,
                None => cfg.qp(0),
            };
            Ok(ExtScalar::new(cfg, a, b))
        }
        Value::String(s) => {
            if let Some(inner) = s.trim().strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
                let x = parse_qp_literal(cfg, inner).map_err(|m| Error::parse(ptr, m))?;
                return sqrt_ext(cfg, &x).map_err(|e| Error::parse(ptr, e.to_string()));
            }
            Ok(ExtScalar::from_qp(cfg, parse_qp(cfg, v, ptr)?))
        }
        _ => Ok(ExtScalar::from_qp(cfg, parse_qp(cfg, v, ptr)?)),
    }
}

/// `{"dim": d, "coeffs": [...]}` or a bare coefficient array.
pub fn parse_vector(cfg: FieldConfig, v: &Value, ptr: &str) -> Result<Vector> {
    let (coeffs, cptr) = match v {
        Value::Array(a) => (a, ptr.to_string()),
        _ => (array(field(v, "coeffs", ptr)?, &child(ptr, "coeffs"))?, child(ptr, "coeffs")),
    };
    let xs = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| parse_scalar(cfg, c, &index(&cptr, i)))
        .collect::<Result<Vec<_>>>()?;
    if let Some(d) = v.get("dim") {
        let d = usize_of(d, &child(ptr, "dim"))?;
        if d != xs.len() {
            return Err(Error::parse(child(ptr, "coeffs"), format!("expected {d} coefficients, found {}", xs.len())));
        }
    }
    Ok(Vector::new(cfg, xs))
}

pub fn parse_vectors(cfg: FieldConfig, v: &Value, ptr: &str) -> Result<Vec<Vector>> {
    array(v, ptr)?.iter().enumerate().map(|(i, x)| parse_vector(cfg, x, &index(ptr, i))).collect()
}

fn parse_extent(v: &Value, ptr: &str) -> Result<Extent> {
    match v {
        Value::String(s) if s == "inf" => Ok(Extent::Infinite),
        _ => usize_of(v, ptr).map(Extent::Finite).map_err(|_| Error::parse(ptr, "expected a size or \"inf\"")),
    }
}

fn parse_ratio(v: &Value, ptr: &str) -> Result<BigRational> {
    match v {
        Value::Number(n) => n.as_i64().map(|k| BigRational::from_integer(k.into())).ok_or_else(|| Error::parse(ptr, "expected an integer or \"n/d\"")),
        Value::String(s) => rational_literal(s).ok_or_else(|| Error::parse(ptr, "expected a rational \"n/d\"")),
        _ => Err(Error::parse(ptr, "expected a rational")),
    }
}

/// `{"rows": r, "cols": c, "entries": [[...]], "tail": {...}?}`. With a tail,
/// `rows`/`cols` may be `"inf"` and the entries give the leading window.
pub fn parse_operator(cfg: FieldConfig, v: &Value, ptr: &str) -> Result<MatrixOperator> {
    let entries_v = match v.get("entries") {
        Some(e) => array(e, &child(ptr, "entries"))?.clone(),
        None => Vec::new(),
    };
    let eptr = child(ptr, "entries");
    let entries = entries_v
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let rp = index(&eptr, i);
            array(row, &rp)?.iter().enumerate().map(|(j, x)| parse_scalar(cfg, x, &index(&rp, j))).collect()
        })
        .collect::<Result<Vec<Vec<ExtScalar>>>>()?;
    let win_rows = entries.len();
    let win_cols = entries.first().map_or(0, Vec::len);
    if let Some(i) = entries.iter().position(|r| r.len() != win_cols) {
        return Err(Error::parse(index(&eptr, i), format!("expected {win_cols} entries in every row")));
    }
    let rows = parse_extent(field(v, "rows", ptr)?, &child(ptr, "rows"))?;
    let cols = parse_extent(field(v, "cols", ptr)?, &child(ptr, "cols"))?;
    match v.get("tail") {
        None | Some(Value::Null) => {
            let (Extent::Finite(r), Extent::Finite(c)) = (rows, cols) else {
                return Err(Error::parse(child(ptr, "tail"), "infinite operators need a tail profile"));
            };
            if r != win_rows || (r > 0 && c != win_cols) {
                return Err(Error::parse(eptr, format!("expected a {r}x{c} entry array")));
            }
            MatrixOperator::new(cfg, r, c, entries).map_err(|e| Error::parse(ptr, e.to_string()))
        }
        Some(t) => {
            let tp = child(ptr, "tail");
            let a = parse_ratio(field(t, "alpha", &tp)?, &child(&tp, "alpha"))?;
            let b = parse_ratio(field(t, "beta", &tp)?, &child(&tp, "beta"))?;
            let g = match t.get("gamma") {
                Some(g) => parse_ratio(g, &child(&tp, "gamma"))?,
                None => BigRational::from_integer(0.into()),
            };
            let profile = TailProfile::new(a, b, g).map_err(|e| Error::parse(&tp, e.to_string()))?;
            MatrixOperator::with_tail(cfg, win_rows, win_cols, entries, profile, rows, cols)
                .map_err(|e| Error::parse(ptr, e.to_string()))
        }
    }
}

/// `{"dims": [dH, dK], "lambda": [[...]]}` or `{"pairs": [[x, y], ...]}`.
pub fn parse_tensor(cfg: FieldConfig, v: &Value, ptr: &str) -> Result<Tensor> {
    let dims = match v.get("dims") {
        Some(d) => {
            let dp = child(ptr, "dims");
            let a = array(d, &dp)?;
            if a.len() != 2 {
                return Err(Error::parse(dp, "expected [dH, dK]"));
            }
            Some((usize_of(&a[0], &index(&dp, 0))?, usize_of(&a[1], &index(&dp, 1))?))
        }
        None => None,
    };
    if let Some(pairs) = v.get("pairs") {
        let pp = child(ptr, "pairs");
        let list = array(pairs, &pp)?
            .iter()
            .enumerate()
            .map(|(i, pr)| {
                let ip = index(&pp, i);
                let xy = array(pr, &ip)?;
                if xy.len() != 2 {
                    return Err(Error::parse(ip, "expected a pair [x, y]"));
                }
                Ok((parse_vector(cfg, &xy[0], &index(&ip, 0))?, parse_vector(cfg, &xy[1], &index(&ip, 1))?))
            })
            .collect::<Result<Vec<_>>>()?;
        let (dh, dk) = match (dims, list.first()) {
            (Some(d), _) => d,
            (None, Some((x, y))) => (x.dim(), y.dim()),
            (None, None) => return Err(Error::parse(child(ptr, "dims"), "an empty pair list needs dims")),
        };
        return Tensor::from_pairs(cfg, dh, dk, list).map_err(|e| Error::parse(pp, e.to_string()));
    }
    let lp = child(ptr, "lambda");
    let rows = array(field(v, "lambda", ptr)?, &lp)?;
    let lambda = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let rp = index(&lp, i);
            array(r, &rp)?.iter().enumerate().map(|(j, x)| parse_scalar(cfg, x, &index(&rp, j))).collect()
        })
        .collect::<Result<Vec<Vec<ExtScalar>>>>()?;
    let (dh, dk) = dims.unwrap_or((lambda.len(), lambda.first().map_or(0, Vec::len)));
    Tensor::from_lambda(cfg, dh, dk, lambda).map_err(|e| Error::parse(lp, e.to_string()))
}

/// `{"ambient": d, "basis": [...], "extension": [...]?}`.
pub fn parse_subspace(cfg: FieldConfig, v: &Value, ptr: &str) -> Result<Subspace> {
    let d = usize_of(field(v, "ambient", ptr)?, &child(ptr, "ambient"))?;
    let bp = child(ptr, "basis");
    let basis = parse_vectors(cfg, field(v, "basis", ptr)?, &bp)?;
    let sub = Subspace::new(cfg, d, basis).map_err(|e| Error::parse(&bp, e.to_string()))?;
    match v.get("extension") {
        Some(e) => {
            let ep = child(ptr, "extension");
            let ext = parse_vectors(cfg, e, &ep)?;
            sub.with_extension(ext).map_err(|e| Error::parse(ep, e.to_string()))
        }
        None => Ok(sub),
    }
}

pub fn qp_json(x: &Qp) -> Value {
    Value::String(x.to_string())
}

pub fn scalar_json(x: &ExtScalar) -> Value {
    json!({"a": x.a().to_string(), "b": x.b().to_string()})
}

pub fn norm_json(n: NormValue) -> Value {
    Value::String(n.to_string())
}

pub fn vector_json(x: &Vector) -> Value {
    json!({"dim": x.dim(), "coeffs": x.coeffs().iter().map(scalar_json).collect::<Vec<_>>()})
}

pub fn vectors_json(xs: &[Vector]) -> Value {
    Value::Array(xs.iter().map(vector_json).collect())
}

fn rows_json(rows: &[Vec<ExtScalar>]) -> Value {
    Value::Array(rows.iter().map(|r| Value::Array(r.iter().map(scalar_json).collect())).collect())
}

pub fn operator_json(t: &MatrixOperator) -> Value {
    let extent = |e: Extent| match e {
        Extent::Finite(n) => json!(n),
        Extent::Infinite => json!("inf"),
    };
    let mut m = Map::new();
    m.insert("rows".into(), extent(t.row_extent()));
    m.insert("cols".into(), extent(t.col_extent()));
    m.insert("entries".into(), rows_json(t.entries()));
    if let Some(tail) = t.tail() {
        let r = |x: &BigRational| Value::String(x.to_string());
        m.insert(
            "tail".into(),
            json!({"alpha": r(tail.profile.alpha()), "beta": r(tail.profile.beta()), "gamma": r(tail.profile.gamma())}),
        );
    }
    Value::Object(m)
}

pub fn tensor_json(t: &Tensor) -> Value {
    let (dh, dk) = t.dims();
    json!({"dims": [dh, dk], "lambda": rows_json(t.lambda())})
}

pub fn subspace_json(w: &Subspace) -> Value {
    let mut m = Map::new();
    m.insert("ambient".into(), json!(w.ambient()));
    m.insert("basis".into(), vectors_json(w.basis()));
    if let Some(e) = w.extension() {
        m.insert("extension".into(), vectors_json(e));
    }
    Value::Object(m)
}
