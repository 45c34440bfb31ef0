//! For `n = 2` the building is an ℝ-tree: the four-point condition and a
//! Graphviz export of the subtree spanned by finitely many points.

use std::fmt::Write as _;

use super::{scalar_distance, BuildingPoint};
use crate::error::{Error, Result};
use crate::log_value::ValueGroupElement;
use crate::report::CheckReport;
use crate::sampling;

fn distances(points: &[BuildingPoint]) -> Result<Vec<Vec<ValueGroupElement>>> {
    let m = points.len();
    let mut d = vec![vec![ValueGroupElement::zero(); m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let x = scalar_distance(&points[i], &points[j])?;
            d[i][j] = x;
            d[j][i] = x;
        }
    }
    Ok(d)
}

/// Of the three pair sums of a quadruple, the two largest agree.
pub fn four_point_check(points: &[BuildingPoint; 4]) -> Result<bool> {
    let d = distances(points)?;
    let mut sums = [d[0][1] + d[2][3], d[0][2] + d[1][3], d[0][3] + d[1][2]];
    sums.sort();
    Ok(sums[1] == sums[2])
}

/// Random quadruples near the base point; some share a generator so their
/// geodesics overlap.
pub fn four_point_suite(samples: usize, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new("four-point condition");
    for i in 0..samples {
        let mut rng = sampling::rng_for(seed, i as u64);
        rep.run(&format!("quadruple {}", i), |rep| {
            let common = sampling::sl_element(&mut rng, 2, 2);
            let mut pts = Vec::with_capacity(4);
            for _ in 0..4 {
                let mut g = sampling::sl_element(&mut rng, 2, 2);
                if rand::Rng::gen_bool(&mut rng, 0.5) {
                    g = common.mul(&g)?;
                }
                pts.push(BuildingPoint::new(g)?);
            }
            let quad: [BuildingPoint; 4] = pts.try_into().expect("four points");
            let ok = four_point_check(&quad)?;
            rep.check(ok, || {
                format!("quadruple {} violates the four-point condition", i)
            });
            Ok(())
        });
    }
    rep
}

struct Node {
    depth: ValueGroupElement,
    parent: Option<usize>,
    labels: Vec<String>,
}

/// The subtree spanned by `points`, rooted at the first one, in dot format.
/// Edge labels are lengths; branch points are unlabeled.
pub fn tree_dot(points: &[BuildingPoint]) -> Result<String> {
    if points.is_empty() {
        return Err(Error::InvalidPoint("no points".into()));
    }
    if points.iter().any(|p| p.n() != 2) {
        return Err(Error::NotSupported("tree export needs n = 2".into()));
    }
    let d = distances(points)?;
    let two = ValueGroupElement::from_integer(2);
    let mut nodes = vec![Node {
        depth: ValueGroupElement::zero(),
        parent: None,
        labels: vec!["p0".into()],
    }];
    let mut leaf = vec![0usize];
    for k in 1..points.len() {
        // the branch point of k is at depth max_i (k|i)_0 along the path to i
        let mut best = (0usize, ValueGroupElement::zero());
        for i in 1..k {
            let g = ValueGroupElement((d[0][k] + d[0][i] - d[k][i]).value() / two.value());
            if g > best.1 {
                best = (i, g);
            }
        }
        let (i, g) = best;
        let mut u = leaf[i];
        let at = loop {
            if nodes[u].depth == g {
                break u;
            }
            let p = nodes[u].parent.expect("depth above zero has a parent");
            if nodes[p].depth > g {
                u = p;
                continue;
            }
            if nodes[p].depth == g {
                break p;
            }
            nodes.push(Node {
                depth: g,
                parent: Some(p),
                labels: vec![],
            });
            let v = nodes.len() - 1;
            nodes[u].parent = Some(v);
            break v;
        };
        if d[0][k] == g {
            nodes[at].labels.push(format!("p{}", k));
            leaf.push(at);
        } else {
            nodes.push(Node {
                depth: d[0][k],
                parent: Some(at),
                labels: vec![format!("p{}", k)],
            });
            leaf.push(nodes.len() - 1);
        }
    }

    let mut out = String::from("graph tree {\n");
    for (idx, node) in nodes.iter().enumerate() {
        if node.labels.is_empty() {
            writeln!(out, "  n{} [label=\"\", shape=point];", idx).unwrap();
        } else {
            writeln!(out, "  n{} [label=\"{}\"];", idx, node.labels.join(",")).unwrap();
        }
    }
    for (idx, node) in nodes.iter().enumerate() {
        if let Some(p) = node.parent {
            let len = node.depth - nodes[p].depth;
            writeln!(out, "  n{} -- n{} [label=\"{}\"];", p, idx, len).unwrap();
        }
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_fields::PMatrix;

    fn pt(rows: &[&[&str]]) -> BuildingPoint {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        BuildingPoint::new(PMatrix::parse_rows(&rows).unwrap()).unwrap()
    }

    #[test]
    fn tripod() {
        let o = BuildingPoint::base(2);
        let a = pt(&[&["t^(-1)", "0"], &["0", "t"]]);
        let b = pt(&[&["t", "0"], &["0", "t^(-1)"]]);
        let c = pt(&[&["t^(-1)", "t^(-2)"], &["0", "t"]]);
        assert!(four_point_check(&[o.clone(), a.clone(), b.clone(), c.clone()]).unwrap());
        let dot = tree_dot(&[o, a, b, c]).unwrap();
        assert!(dot.starts_with("graph tree {"));
        assert_eq!(dot.matches(" -- ").count(), 3);
        assert!(dot.contains("label=\"p3\""));
    }

    #[test]
    fn collinear_points_share_a_path() {
        let o = BuildingPoint::base(2);
        let a = pt(&[&["t^(-1)", "0"], &["0", "t"]]);
        let b = pt(&[&["t^(-2)", "0"], &["0", "t^2"]]);
        let dot = tree_dot(&[o, b, a]).unwrap();
        assert_eq!(dot.matches(" -- ").count(), 2);
        assert!(dot.contains("[label=\"4\"]"));
    }

    #[test]
    fn random_quadruples() {
        let r = four_point_suite(30, 7);
        assert!(r.passed(), "{}", r);
    }
}
