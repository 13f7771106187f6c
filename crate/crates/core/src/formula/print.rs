use super::Formula;

/// A formula node seen through the derived-connective sugar.
enum View<'a> {
    Atom(&'a str, &'a [String]),
    Bottom,
    Top,
    Not(&'a Formula),
    Or(&'a Formula, &'a Formula),
    Iff(&'a Formula, &'a Formula),
    And(&'a Formula, &'a Formula),
    Strong(&'a Formula, &'a Formula),
    Implies(&'a Formula, &'a Formula),
    Forall(&'a str, &'a Formula),
    Exists(&'a str, &'a Formula),
}

fn view(f: &Formula) -> View<'_> {
    match f {
        Formula::Atom { pred, args } => View::Atom(pred, args),
        Formula::Bottom => View::Bottom,
        Formula::Implies(a, b) if **b == Formula::Bottom => {
            if **a == Formula::Bottom {
                View::Top
            } else {
                View::Not(a)
            }
        }
        Formula::Implies(a, b) => View::Implies(a, b),
        Formula::And(l, r) => {
            if let Some((a, b)) = as_or(l, r) {
                View::Or(a, b)
            } else if let Some((a, b)) = as_iff(l, r) {
                View::Iff(a, b)
            } else {
                View::And(l, r)
            }
        }
        Formula::Strong(a, b) => View::Strong(a, b),
        Formula::Forall(v, body) => View::Forall(v, body),
        Formula::Exists(v, body) => View::Exists(v, body),
    }
}

// ((a -> b) -> b) /\ ((b -> a) -> a)
fn as_or<'a>(l: &'a Formula, r: &'a Formula) -> Option<(&'a Formula, &'a Formula)> {
    let (Formula::Implies(ab, b1), Formula::Implies(ba, a1)) = (l, r) else {
        return None;
    };
    let (Formula::Implies(a, b), Formula::Implies(b2, a2)) = (&**ab, &**ba) else {
        return None;
    };
    (b == b1 && b == b2 && a == a1 && a == a2).then_some((a, b))
}

// (a -> b) /\ (b -> a)
fn as_iff<'a>(l: &'a Formula, r: &'a Formula) -> Option<(&'a Formula, &'a Formula)> {
    let (Formula::Implies(a, b), Formula::Implies(b2, a2)) = (l, r) else {
        return None;
    };
    (a == a2 && b == b2).then_some((a, b))
}

const QUANT: u8 = 0;
const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const STRONG: u8 = 5;
const NOT: u8 = 6;
const ATOMIC: u8 = 7;

fn precedence(v: &View<'_>) -> u8 {
    match v {
        View::Forall(..) | View::Exists(..) => QUANT,
        View::Iff(..) => IFF,
        View::Implies(..) => IMPLIES,
        View::Or(..) => OR,
        View::And(..) => AND,
        View::Strong(..) => STRONG,
        View::Not(..) => NOT,
        View::Atom(..) | View::Bottom | View::Top => ATOMIC,
    }
}

fn write_atom(out: &mut String, pred: &str, args: &[String], sep: &str) {
    out.push_str(pred);
    if !args.is_empty() {
        out.push('(');
        out.push_str(&args.join(sep));
        out.push(')');
    }
}

fn pretty(f: &Formula, min: u8, out: &mut String) {
    let v = view(f);
    let prec = precedence(&v);
    let paren = prec < min;
    if paren {
        out.push('(');
    }
    let binary = |out: &mut String, a: &Formula, op: &str, b: &Formula, lmin: u8, rmin: u8| {
        pretty(a, lmin, out);
        out.push_str(op);
        pretty(b, rmin, out);
    };
    match v {
        View::Atom(p, args) => write_atom(out, p, args, ", "),
        View::Bottom => out.push_str("bot"),
        View::Top => out.push_str("top"),
        View::Not(a) => {
            out.push('~');
            pretty(a, NOT, out);
        }
        View::Iff(a, b) => binary(out, a, " <-> ", b, IFF, IFF + 1),
        View::Implies(a, b) => binary(out, a, " -> ", b, IMPLIES + 1, IMPLIES),
        View::Or(a, b) => binary(out, a, " \\/ ", b, OR, OR + 1),
        View::And(a, b) => binary(out, a, " /\\ ", b, AND, AND + 1),
        View::Strong(a, b) => binary(out, a, " & ", b, STRONG, STRONG + 1),
        View::Forall(x, body) | View::Exists(x, body) => {
            let kw = if matches!(f, Formula::Forall(..)) {
                "forall"
            } else {
                "exists"
            };
            out.push_str(kw);
            out.push(' ');
            out.push_str(x);
            out.push_str(". ");
            pretty(body, QUANT, out);
        }
    }
    if paren {
        out.push(')');
    }
}

/// Readable form with minimal parentheses and sugar for `~`, `\/`, `<->`, `top`.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    pretty(f, QUANT, &mut out);
    out
}

fn compact_operand(f: &Formula, out: &mut String) {
    let atomic = matches!(
        view(f),
        View::Atom(..) | View::Bottom | View::Top
    );
    if atomic {
        compact(f, out);
    } else {
        out.push('(');
        compact(f, out);
        out.push(')');
    }
}

fn compact(f: &Formula, out: &mut String) {
    let binary = |out: &mut String, a: &Formula, op: &str, b: &Formula| {
        compact_operand(a, out);
        out.push_str(op);
        compact_operand(b, out);
    };
    match view(f) {
        View::Atom(p, args) => write_atom(out, p, args, ","),
        View::Bottom => out.push_str("bot"),
        View::Top => out.push_str("top"),
        View::Not(a) => {
            out.push('~');
            if matches!(view(a), View::Not(_)) {
                compact(a, out);
            } else {
                compact_operand(a, out);
            }
        }
        View::Iff(a, b) => binary(out, a, "<->", b),
        View::Implies(a, b) => binary(out, a, "->", b),
        View::Or(a, b) => binary(out, a, "\\/", b),
        View::And(a, b) => binary(out, a, "/\\", b),
        View::Strong(a, b) => binary(out, a, "&", b),
        View::Forall(x, body) => {
            out.push_str("forall ");
            out.push_str(x);
            out.push('.');
            compact(body, out);
        }
        View::Exists(x, body) => {
            out.push_str("exists ");
            out.push_str(x);
            out.push('.');
            compact(body, out);
        }
    }
}

/// Fully parenthesized form without spaces, e.g.
/// `((P(x)&P(x))->(q&q))&((P(x)&P(x))->(q&q))`.
pub fn print_compact(f: &Formula) -> String {
    let mut out = String::new();
    compact(f, &mut out);
    out
}
