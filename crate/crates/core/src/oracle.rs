//! Ground-truth brute force: breadth-first enumeration of Cayley balls keyed
//! by canonical normal forms. Every fast routine in this crate is
//! cross-validated against these tables.

use crate::error::{Error, Result};
use crate::graph::PresentationGraph;
use crate::word::{self, shortlex_cmp, NormalForm, Word};
use std::collections::HashMap;

/// Default element cap for ball enumeration; the CLI honours the
/// `RACG_ELEMENT_CAP` environment variable instead.
pub const DEFAULT_ELEMENT_CAP: usize = 10_000_000;

/// A radius-r Cayley ball: distances from the identity for every element of
/// length at most r, with deterministic shortlex iteration order.
#[derive(Debug, Clone)]
pub struct Ball {
    radius: usize,
    table: HashMap<NormalForm, usize>,
    spheres: Vec<Vec<NormalForm>>,
}

/// Enumerates the ball of the given radius with the default element cap.
pub fn ball(graph: &PresentationGraph, radius: usize) -> Result<Ball> {
    ball_with_cap(graph, radius, DEFAULT_ELEMENT_CAP)
}

pub fn ball_with_cap(graph: &PresentationGraph, radius: usize, cap: usize) -> Result<Ball> {
    let n = graph.vertex_count() as u8;
    let mut table: HashMap<NormalForm, usize> = HashMap::new();
    let mut spheres: Vec<Vec<NormalForm>> = Vec::with_capacity(radius + 1);

    let identity = NormalForm::identity();
    table.insert(identity.clone(), 0);
    spheres.push(vec![identity]);

    for d in 0..radius {
        let mut next: Vec<Word> = Vec::new();
        for elem in &spheres[d] {
            for s in 0..n {
                let mut w = elem.as_slice().to_vec();
                if !word::append_letter(graph, &mut w, s) {
                    continue; // went backwards
                }
                let nf = word::normal_form(graph, &w)?;
                debug_assert_eq!(nf.len(), d + 1);
                if !table.contains_key(&nf) {
                    table.insert(nf.clone(), d + 1);
                    next.push(nf.into_word());
                    if table.len() > cap {
                        return Err(Error::Resource(format!(
                            "ball enumeration exceeded the element cap of {cap}"
                        )));
                    }
                }
            }
        }
        next.sort_unstable_by(|a, b| shortlex_cmp(a, b));
        spheres.push(next.into_iter().map(NormalForm::from_canonical).collect());
    }

    Ok(Ball {
        radius,
        table,
        spheres,
    })
}

impl Ball {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the identity is always present
    }

    pub fn contains(&self, g: &NormalForm) -> bool {
        self.table.contains_key(g)
    }

    /// BFS distance from the identity.
    pub fn distance_from_identity(&self, g: &NormalForm) -> Result<usize> {
        self.table
            .get(g)
            .copied()
            .ok_or_else(|| Error::Range("element outside the enumerated ball".into()))
    }

    /// BFS distance d(g,h) = ℓ(g⁻¹h); g⁻¹h must lie within the radius.
    pub fn distance(
        &self,
        graph: &PresentationGraph,
        g: &NormalForm,
        h: &NormalForm,
    ) -> Result<usize> {
        let diff = word::left_difference(graph, g, h)?;
        self.distance_from_identity(&diff)
    }

    /// Elements of the sphere of radius d, shortlex sorted.
    pub fn sphere(&self, d: usize) -> Result<&[NormalForm]> {
        self.spheres
            .get(d)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::Range(format!("sphere {d} beyond radius {}", self.radius)))
    }

    /// (radius, count) pairs for 0..=radius.
    pub fn sphere_sizes(&self) -> Vec<(usize, usize)> {
        self.spheres.iter().enumerate().map(|(d, s)| (d, s.len())).collect()
    }

    /// All elements in shortlex order.
    pub fn elements(&self) -> impl Iterator<Item = &NormalForm> {
        self.spheres.iter().flatten()
    }

    /// Every geodesic word for g, lexicographically sorted. All of them carry
    /// the same letter multiset.
    pub fn all_geodesics(&self, graph: &PresentationGraph, g: &NormalForm) -> Result<Vec<Word>> {
        if !self.contains(g) {
            return Err(Error::Range("element outside the enumerated ball".into()));
        }
        fn rec(graph: &PresentationGraph, w: &[u8], out_prefix: &mut Word, out: &mut Vec<Word>) {
            if w.is_empty() {
                out.push(out_prefix.clone());
                return;
            }
            for s in 0..graph.vertex_count() as u8 {
                // s starts a geodesic word iff it is a left descent
                let mut rest = w.to_vec();
                let mut found = None;
                for j in 0..rest.len() {
                    if rest[j] == s {
                        found = Some(j);
                        break;
                    }
                    if !graph.adjacent(rest[j], s) {
                        break;
                    }
                }
                if let Some(j) = found {
                    rest.remove(j);
                    out_prefix.push(s);
                    rec(graph, &rest, out_prefix, out);
                    out_prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(graph, g.as_slice(), &mut Vec::new(), &mut out);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;
    use crate::word::{normal_form, parse_word};

    #[test]
    fn ball_sizes() {
        let c5 = fixture("C5").unwrap();
        assert_eq!(ball(&c5, 1).unwrap().len(), 6);

        let c4 = fixture("C4").unwrap();
        assert_eq!(ball(&c4, 2).unwrap().len(), 13);

        let k3 = fixture("K3").unwrap();
        let b = ball(&k3, 3).unwrap();
        assert_eq!(b.len(), 8); // the whole group (Z/2)^3
        assert_eq!(b.sphere(3).unwrap().len(), 1);
    }

    #[test]
    fn element_cap_trips() {
        let c5 = fixture("C5").unwrap();
        assert!(matches!(
            ball_with_cap(&c5, 4, 10),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn distances() {
        let c5 = fixture("C5").unwrap();
        let b = ball(&c5, 3).unwrap();
        let id = NormalForm::identity();
        let ac = normal_form(&c5, &parse_word(&c5, "a c").unwrap()).unwrap();
        assert_eq!(b.distance(&c5, &ac, &ac).unwrap(), 0);
        assert_eq!(b.distance(&c5, &id, &ac).unwrap(), 2);

        let c4 = fixture("C4").unwrap();
        let b4 = ball(&c4, 3).unwrap();
        let a = normal_form(&c4, &parse_word(&c4, "a").unwrap()).unwrap();
        let ac4 = normal_form(&c4, &parse_word(&c4, "a c").unwrap()).unwrap();
        assert_eq!(b4.distance(&c4, &a, &ac4).unwrap(), 1);

        // out of range
        let far = normal_form(&c5, &parse_word(&c5, "a c a c").unwrap()).unwrap();
        assert!(matches!(
            b.distance_from_identity(&far),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn geodesic_enumeration() {
        let c4 = fixture("C4").unwrap();
        let b = ball(&c4, 3).unwrap();
        assert_eq!(
            b.all_geodesics(&c4, &NormalForm::identity()).unwrap(),
            vec![Vec::<u8>::new()]
        );
        let ab = normal_form(&c4, &parse_word(&c4, "a b").unwrap()).unwrap();
        let geos = b.all_geodesics(&c4, &ab).unwrap();
        assert_eq!(
            geos,
            vec![
                parse_word(&c4, "a b").unwrap(),
                parse_word(&c4, "b a").unwrap()
            ]
        );

        let c5 = fixture("C5").unwrap();
        let b5 = ball(&c5, 3).unwrap();
        let ca = normal_form(&c5, &parse_word(&c5, "c a").unwrap()).unwrap();
        assert_eq!(
            b5.all_geodesics(&c5, &ca).unwrap(),
            vec![parse_word(&c5, "c a").unwrap()]
        );
    }

    #[test]
    fn deterministic_iteration() {
        let c5 = fixture("C5").unwrap();
        let b1 = ball(&c5, 3).unwrap();
        let b2 = ball(&c5, 3).unwrap();
        let e1: Vec<_> = b1.elements().collect();
        let e2: Vec<_> = b2.elements().collect();
        assert_eq!(e1, e2);
        assert_eq!(b1.sphere_sizes(), b2.sphere_sizes());
    }
}
