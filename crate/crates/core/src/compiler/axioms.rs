//! Order and arithmetic axioms.
//!
//! Every axiom takes its variable names from the caller so that the whole
//! compiled sentence stays inside one variable pool.

use crate::formula::{Formula, Var};

use super::names::*;

fn a1(rel: &str, x: &Var) -> Formula {
    Formula::atom(rel, [x.clone()])
}

fn a2(rel: &str, x: &Var, y: &Var) -> Formula {
    Formula::atom(rel, [x.clone(), y.clone()])
}

fn a3(rel: &str, x: &Var, y: &Var, z: &Var) -> Formula {
    Formula::atom(rel, [x.clone(), y.clone(), z.clone()])
}

fn fa(v: &Var, f: Formula) -> Formula {
    Formula::forall(v.clone(), f)
}

fn ex(v: &Var, f: Formula) -> Formula {
    Formula::exists(v.clone(), f)
}

fn and(parts: Vec<Formula>) -> Formula {
    Formula::and_all(parts).expect("non-empty")
}

/// Strict total order `LT` with successor `SUC` and endpoints `MIN`, `MAX`.
pub fn order_axioms(v: &[Var]) -> Vec<Formula> {
    let (x, y, z) = (&v[0], &v[1], &v[2]);
    vec![
        fa(x, Formula::not(a2(LT, x, x))),
        fa(
            x,
            fa(
                y,
                fa(
                    z,
                    Formula::implies(Formula::and(a2(LT, x, y), a2(LT, y, z)), a2(LT, x, z)),
                ),
            ),
        ),
        fa(
            x,
            fa(
                y,
                Formula::or(
                    a2(LT, x, y),
                    Formula::or(Formula::eq(x.clone(), y.clone()), a2(LT, y, x)),
                ),
            ),
        ),
        fa(
            x,
            fa(
                y,
                Formula::iff(
                    a2(SUC, x, y),
                    Formula::and(
                        a2(LT, x, y),
                        Formula::not(ex(z, Formula::and(a2(LT, x, z), a2(LT, z, y)))),
                    ),
                ),
            ),
        ),
        fa(
            x,
            Formula::iff(a1(MIN, x), Formula::not(ex(y, a2(LT, y, x)))),
        ),
        fa(
            x,
            Formula::iff(a1(MAX, x), Formula::not(ex(y, a2(LT, x, y)))),
        ),
    ]
}

/// `DOUBLE`, `HALF`, `DIV`, `BIT` and `INPUT`: three variables each.
pub fn arithmetic_axioms_flat(v: &[Var]) -> Vec<Formula> {
    let (x, y, z) = (&v[0], &v[1], &v[2]);
    let double = fa(
        x,
        fa(
            y,
            Formula::iff(
                a2(DOUBLE, x, y),
                Formula::or(
                    Formula::and(a1(MIN, x), a1(MIN, y)),
                    ex(
                        z,
                        Formula::and(
                            a2(SUC, z, x),
                            ex(
                                x,
                                Formula::and(
                                    a2(SUC, x, z),
                                    ex(z, Formula::and(a2(SUC, z, y), a2(DOUBLE, x, z))),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        ),
    );
    let half = fa(
        x,
        fa(
            y,
            Formula::iff(
                a2(HALF, x, y),
                Formula::or(
                    a2(DOUBLE, y, x),
                    ex(z, Formula::and(a2(DOUBLE, z, x), a2(SUC, z, y))),
                ),
            ),
        ),
    );
    let div = fa(
        x,
        fa(
            y,
            Formula::iff(
                a2(DIV, x, y),
                Formula::or(
                    Formula::and(a1(MAX, x), a1(MIN, y)),
                    ex(
                        z,
                        Formula::and(
                            a2(SUC, z, y),
                            ex(y, Formula::and(a2(DIV, y, z), a2(HALF, x, y))),
                        ),
                    ),
                ),
            ),
        ),
    );
    let bit = fa(
        y,
        Formula::iff(
            a1(BIT, y),
            ex(
                x,
                Formula::and(a2(DIV, x, y), Formula::not(ex(z, a2(DOUBLE, x, z)))),
            ),
        ),
    );
    let input = ex(
        x,
        and(vec![
            Formula::not(a1(BIT, x)),
            a1(INPUT, x),
            fa(
                y,
                Formula::implies(
                    a2(LT, y, x),
                    Formula::and(a1(BIT, y), Formula::not(a1(INPUT, y))),
                ),
            ),
            fa(
                y,
                Formula::implies(a2(LT, x, y), Formula::iff(a1(INPUT, y), a1(BIT, y))),
            ),
        ]),
    );
    vec![double, half, div, bit, input]
}

/// Addition, multiplication and the pairing relations: five variables each.
pub fn arithmetic_axioms_paired(v: &[Var]) -> Vec<Formula> {
    let (x, y, z, y2, z2) = (&v[0], &v[1], &v[2], &v[3], &v[4]);
    let add = fa(
        x,
        fa(
            y,
            fa(
                z,
                Formula::iff(
                    a3(ADD, x, y, z),
                    Formula::or(
                        Formula::and(a1(MIN, y), Formula::eq(x.clone(), z.clone())),
                        ex(
                            y2,
                            ex(
                                z2,
                                and(vec![a2(SUC, y2, y), a2(SUC, z2, z), a3(ADD, x, y2, z2)]),
                            ),
                        ),
                    ),
                ),
            ),
        ),
    );
    let mul = fa(
        x,
        fa(
            y,
            fa(
                z,
                Formula::iff(
                    a3(MUL, x, y, z),
                    Formula::or(
                        Formula::and(a1(MIN, y), a1(MIN, z)),
                        ex(
                            y2,
                            ex(
                                z2,
                                and(vec![a2(SUC, y2, y), a3(MUL, x, y2, z2), a3(ADD, z2, x, z)]),
                            ),
                        ),
                    ),
                ),
            ),
        ),
    );
    // x' and y' of the displayed axiom are z and y2
    let is_r = fa(
        x,
        Formula::iff(
            a1(IS_R, x),
            Formula::and(
                ex(y, a3(MUL, x, x, y)),
                Formula::not(ex(z, ex(y2, Formula::and(a2(LT, x, z), a3(MUL, z, z, y2))))),
            ),
        ),
    );
    let less_r = fa(
        x,
        Formula::iff(
            a1(LESS_R, x),
            ex(y, Formula::and(a2(LT, x, y), a1(IS_R, y))),
        ),
    );
    let less_r2 = fa(
        x,
        Formula::iff(
            a1(LESS_R2, x),
            ex(
                y,
                ex(z, and(vec![a1(IS_R, y), a3(MUL, y, y, z), a2(LT, x, z)])),
            ),
        ),
    );
    // PROJECT(r, x, y) with r := y2
    let (r, px, py) = (y2, x, y);
    let project = fa(
        r,
        fa(
            px,
            fa(
                py,
                Formula::iff(
                    a3(PROJECT, r, px, py),
                    and(vec![
                        a1(LESS_R2, r),
                        a1(LESS_R, px),
                        a1(LESS_R, py),
                        ex(
                            z,
                            ex(
                                z2,
                                and(vec![a1(IS_R, z2), a3(MUL, py, z2, z), a3(ADD, px, z, r)]),
                            ),
                        ),
                    ]),
                ),
            ),
        ),
    );
    let rcyc = fa(
        x,
        fa(
            y,
            Formula::iff(
                a2(RCYC, x, y),
                and(vec![
                    a1(LESS_R, x),
                    a1(LESS_R, y),
                    Formula::or(
                        a2(SUC, x, y),
                        Formula::and(ex(z, Formula::and(a1(IS_R, z), a2(SUC, x, z))), a1(MIN, y)),
                    ),
                ]),
            ),
        ),
    );
    // r, s := x, y; projections in z, y2, z2
    let (r, s, a, b, c) = (x, y, z, y2, z2);
    let sucx = fa(
        r,
        fa(
            s,
            Formula::iff(
                a2(SUCX, r, s),
                ex(
                    a,
                    ex(
                        b,
                        ex(
                            c,
                            and(vec![
                                a3(PROJECT, r, a, c),
                                a3(PROJECT, s, b, c),
                                a2(RCYC, a, b),
                            ]),
                        ),
                    ),
                ),
            ),
        ),
    );
    let sucy = fa(
        r,
        fa(
            s,
            Formula::iff(
                a2(SUCY, r, s),
                ex(
                    a,
                    ex(
                        b,
                        ex(
                            c,
                            and(vec![
                                a3(PROJECT, r, c, a),
                                a3(PROJECT, s, c, b),
                                a2(RCYC, a, b),
                            ]),
                        ),
                    ),
                ),
            ),
        ),
    );
    let minx = fa(
        r,
        Formula::iff(
            a1(MINX, r),
            ex(a, ex(b, Formula::and(a3(PROJECT, r, a, b), a1(MIN, a)))),
        ),
    );
    let miny = fa(
        r,
        Formula::iff(
            a1(MINY, r),
            ex(a, ex(b, Formula::and(a3(PROJECT, r, a, b), a1(MIN, b)))),
        ),
    );
    vec![
        add, mul, is_r, less_r, less_r2, project, rcyc, sucx, sucy, minx, miny,
    ]
}
