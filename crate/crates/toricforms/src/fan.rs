//! Fans and cones: validation, faces, torus factors, the codimension-2 face
//! graph, a quasi-projectivity LP and the automorphism group Aut_Σ.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlin::{
    complete_to_unimodular, dot, integer_kernel_basis, is_primitive, is_unimodular, rank, solve_integer_system,
    unimodular_inverse, IntVec, IntegerMatrix,
};
use crate::lp::{q, Cmp, LinearProgram, LpOutcome};
use crate::symgrp::{generate_closure, GroupError, MatrixGroup};

#[derive(Debug, Error)]
pub enum FanError {
    #[error("invalid fan: {0}")]
    Invalid(ValidationReport),
    #[error("the rays do not span the lattice (torus factor); Aut is infinite")]
    TorusFactor,
    #[error("cone is not full-dimensional (dimension {0} in rank {1})")]
    DimensionError(usize, usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("bad fan document: {0}")]
    Parse(String),
}

/// Input document: `dim`, `rays`, `max_cones` (0-based ray indices).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub dim: usize,
    #[serde(with = "ray_serde")]
    pub rays: Vec<IntVec>,
    pub max_cones: Vec<Vec<usize>>,
}

mod ray_serde {
    use super::IntVec;
    use crate::intlin::{bigint_to_json, json_to_bigint};
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(rays: &[IntVec], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<serde_json::Value>> = rays.iter().map(|r| r.iter().map(bigint_to_json).collect()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<IntVec>, D::Error> {
        let v: Vec<Vec<serde_json::Value>> = Vec::deserialize(d)?;
        v.iter()
            .map(|r| r.iter().map(|x| json_to_bigint(x).map_err(D::Error::custom)).collect())
            .collect()
    }
}

impl Fan {
    pub fn new(dim: usize, rays: Vec<IntVec>, max_cones: Vec<Vec<usize>>) -> Self {
        Fan { dim, rays, max_cones }
    }

    pub fn from_i64(dim: usize, rays: &[Vec<i64>], max_cones: Vec<Vec<usize>>) -> Self {
        let rays = rays.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Fan { dim, rays, max_cones }
    }

    /// The fan of all faces of the cone on `rays`.
    pub fn face_fan(dim: usize, rays: Vec<IntVec>) -> Self {
        let k = rays.len();
        Fan { dim, rays, max_cones: vec![(0..k).collect()] }
    }

    /// Rays only, each its own maximal cone.
    pub fn rays_only(dim: usize, rays: Vec<IntVec>) -> Self {
        let k = rays.len();
        Fan { dim, rays, max_cones: (0..k).map(|i| vec![i]).collect() }
    }

    pub fn from_json(text: &str) -> Result<Self, FanError> {
        serde_json::from_str(text).map_err(|e| FanError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fan serializes")
    }

    pub fn cone(&self, i: usize) -> Cone {
        Cone::new(&self.rays, &self.max_cones[i])
    }

    /// Maximal cones with duplicates removed (first occurrence kept).
    fn distinct_cones(&self) -> Vec<Vec<usize>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for c in &self.max_cones {
            let mut s = c.clone();
            s.sort_unstable();
            s.dedup();
            if seen.insert(s.clone()) {
                out.push(s);
            }
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        validate_fan(self)
    }
}

/// A polyhedral cone generated by a subset of the fan's rays, with its facet
/// inequalities and the equations cutting out its linear span.
#[derive(Clone, Debug)]
pub struct Cone {
    pub ray_indices: Vec<usize>,
    pub facet_normals: Vec<IntVec>,
    pub span_equations: Vec<IntVec>,
    pub dim: usize,
    ambient: usize,
    vectors: Vec<IntVec>,
    facets: Vec<Vec<usize>>,
    strongly_convex: bool,
}

impl Cone {
    pub fn new(all_rays: &[IntVec], indices: &[usize]) -> Cone {
        let mut ray_indices = indices.to_vec();
        ray_indices.sort_unstable();
        ray_indices.dedup();
        let n = all_rays.first().map_or(0, |r| r.len());
        let vectors: Vec<IntVec> = ray_indices.iter().map(|&i| all_rays[i].clone()).collect();
        let empty = || Cone {
            ray_indices: ray_indices.clone(),
            facet_normals: vec![],
            span_equations: (0..n).map(|i| unit(n, i)).collect(),
            dim: 0,
            ambient: n,
            vectors: vectors.clone(),
            facets: vec![],
            strongly_convex: true,
        };
        if vectors.is_empty() || vectors.iter().all(|v| v.iter().all(|x| x.is_zero())) {
            return empty();
        }
        let rmat = IntegerMatrix::from_rows(n, &vectors);
        let span_equations = integer_kernel_basis(&rmat);
        let basis: Vec<IntVec> = if span_equations.is_empty() {
            (0..n).map(|i| unit(n, i)).collect()
        } else {
            integer_kernel_basis(&IntegerMatrix::from_rows(n, &span_equations))
        };
        let d = basis.len();
        let bmat = IntegerMatrix::from_columns(n, &basis);
        let coords: Vec<IntVec> = vectors
            .iter()
            .map(|v| solve_integer_system(&bmat, v).expect("ray lies in its saturated span"))
            .collect();
        let completed = complete_to_unimodular(n, &basis).expect("saturated basis completes");
        let inv = unimodular_inverse(&completed).expect("unimodular completion");
        let left_inv = inv.submatrix(0, d, 0, n);

        let k = vectors.len();
        let mut normals_y: Vec<IntVec> = Vec::new();
        let mut facets: Vec<Vec<usize>> = Vec::new();
        for subset in subsets(k, d - 1) {
            let kernel: Vec<IntVec> = if subset.is_empty() {
                (0..d).map(|i| unit(d, i)).collect()
            } else {
                let sub: Vec<IntVec> = subset.iter().map(|&i| coords[i].clone()).collect();
                let m = IntegerMatrix::from_rows(d, &sub);
                if rank(&m) != d - 1 {
                    continue;
                }
                integer_kernel_basis(&m)
            };
            if kernel.len() != 1 {
                continue;
            }
            let mut nu = kernel[0].clone();
            let vals: Vec<BigInt> = coords.iter().map(|y| dot(&nu, y)).collect();
            let pos = vals.iter().any(|v| v.is_positive());
            let neg = vals.iter().any(|v| v.is_negative());
            if pos && neg {
                continue;
            }
            if neg {
                nu = nu.iter().map(|x| -x).collect();
            }
            if normals_y.contains(&nu) {
                continue;
            }
            let on: Vec<usize> = (0..k).filter(|&i| vals[i].is_zero()).map(|i| ray_indices[i]).collect();
            normals_y.push(nu);
            facets.push(on);
        }
        let strongly_convex = if normals_y.is_empty() {
            false
        } else {
            rank(&IntegerMatrix::from_rows(d, &normals_y)) == d
        };
        let facet_normals = normals_y
            .iter()
            .map(|nu| {
                let row = IntegerMatrix::from_rows(d, std::slice::from_ref(nu)).mul(&left_inv);
                row.row(0)
            })
            .collect();
        Cone {
            ray_indices,
            facet_normals,
            span_equations,
            dim: d,
            ambient: n,
            vectors,
            facets,
            strongly_convex,
        }
    }

    pub fn is_strongly_convex(&self) -> bool {
        self.strongly_convex
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    /// Facets as ray-index sets.
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.span_equations.iter().all(|e| dot(e, x).is_zero())
            && self.facet_normals.iter().all(|u| !dot(u, x).is_negative())
    }

    /// Smallest face containing the given rays: the intersection of all
    /// facets containing them.
    pub fn face_closure(&self, set: &[usize]) -> Vec<usize> {
        let mut face: BTreeSet<usize> = self.ray_indices.iter().copied().collect();
        for f in &self.facets {
            if set.iter().all(|x| f.binary_search(x).is_ok()) {
                face = face.intersection(&f.iter().copied().collect()).copied().collect();
            }
        }
        face.into_iter().collect()
    }

    /// Dimension of the cone spanned by a subset of this cone's rays.
    pub fn face_dim(&self, face: &[usize]) -> usize {
        let vecs: Vec<IntVec> = face
            .iter()
            .map(|i| {
                let p = self.ray_indices.binary_search(i).expect("ray of this cone");
                self.vectors[p].clone()
            })
            .collect();
        if vecs.is_empty() {
            0
        } else {
            rank(&IntegerMatrix::from_rows(self.ambient, &vecs))
        }
    }
}

fn unit(n: usize, i: usize) -> IntVec {
    (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
}

fn subsets(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, k: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            rec(i + 1, k, r, cur, out);
            cur.pop();
        }
    }
    rec(0, k, r, &mut cur, &mut out);
    out
}

/// All faces (including the origin and the cone itself) as ray-index sets,
/// sorted by (dimension, indices).
pub fn faces_of_cone(sigma: &Cone) -> Vec<Vec<usize>> {
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    faces.insert(sigma.ray_indices.clone());
    let mut frontier = vec![sigma.ray_indices.clone()];
    while let Some(f) = frontier.pop() {
        for g in &sigma.facets {
            let inter: Vec<usize> = f.iter().copied().filter(|x| g.binary_search(x).is_ok()).collect();
            if faces.insert(inter.clone()) {
                frontier.push(inter);
            }
        }
    }
    let mut v: Vec<Vec<usize>> = faces.into_iter().collect();
    v.sort_by_key(|f| (sigma.face_dim(f), f.clone()));
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FanViolation {
    WrongLength { ray: usize },
    ZeroRay { ray: usize },
    NonPrimitiveRay { ray: usize },
    DuplicateRay { first: usize, second: usize },
    BadRayIndex { cone: usize, index: usize },
    NotStronglyConvex { cone: usize },
    NonExtremalRay { cone: usize, ray: usize },
    BadIntersection { first: usize, second: usize },
}

impl fmt::Display for FanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FanViolation::WrongLength { ray } => write!(f, "ray {ray} has the wrong length"),
            FanViolation::ZeroRay { ray } => write!(f, "ray {ray} is zero"),
            FanViolation::NonPrimitiveRay { ray } => write!(f, "ray {ray} is not primitive"),
            FanViolation::DuplicateRay { first, second } => write!(f, "rays {first} and {second} coincide"),
            FanViolation::BadRayIndex { cone, index } => write!(f, "cone {cone} refers to missing ray {index}"),
            FanViolation::NotStronglyConvex { cone } => write!(f, "cone {cone} is not strongly convex"),
            FanViolation::NonExtremalRay { cone, ray } => write!(f, "ray {ray} is not an extremal ray of cone {cone}"),
            FanViolation::BadIntersection { first, second } => {
                write!(f, "cones {first} and {second} do not meet in a common face")
            }
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<FanViolation>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub fn validate_fan(fan: &Fan) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let n = fan.dim;
    let mut rays_ok = true;
    for (i, r) in fan.rays.iter().enumerate() {
        if r.len() != n {
            rep.violations.push(FanViolation::WrongLength { ray: i });
            rays_ok = false;
        } else if r.iter().all(|x| x.is_zero()) {
            rep.violations.push(FanViolation::ZeroRay { ray: i });
            rays_ok = false;
        } else if !is_primitive(r) {
            rep.violations.push(FanViolation::NonPrimitiveRay { ray: i });
        }
    }
    for i in 0..fan.rays.len() {
        for j in i + 1..fan.rays.len() {
            if fan.rays[i] == fan.rays[j] {
                rep.violations.push(FanViolation::DuplicateRay { first: i, second: j });
            }
        }
    }
    if fan.distinct_cones().len() != fan.max_cones.len() {
        rep.warnings.push("duplicate cones removed".to_string());
    }
    let mut index_ok = true;
    for (ci, c) in fan.max_cones.iter().enumerate() {
        for &x in c {
            if x >= fan.rays.len() {
                rep.violations.push(FanViolation::BadRayIndex { cone: ci, index: x });
                index_ok = false;
            }
        }
    }
    if !rays_ok || !index_ok {
        return rep;
    }
    let cones_idx = fan.distinct_cones();
    let cones: Vec<Cone> = cones_idx.iter().map(|c| Cone::new(&fan.rays, c)).collect();
    for (ci, cone) in cones.iter().enumerate() {
        if !cone.is_strongly_convex() {
            rep.violations.push(FanViolation::NotStronglyConvex { cone: ci });
            continue;
        }
        for &r in &cone.ray_indices {
            if cone.face_closure(&[r]) != vec![r] {
                rep.violations.push(FanViolation::NonExtremalRay { cone: ci, ray: r });
            }
        }
    }
    for a in 0..cones.len() {
        for b in a + 1..cones.len() {
            if !meets_in_common_face(&fan.rays, &cones[a].ray_indices, &cones[b].ray_indices) {
                rep.violations.push(FanViolation::BadIntersection { first: a, second: b });
            }
        }
    }
    rep
}

/// Separation test: a functional vanishing on the shared rays, ≥ 1 on the
/// rays only in `a` and ≤ −1 on the rays only in `b` exists iff the two cones
/// meet in the common face spanned by their shared rays.
fn meets_in_common_face(rays: &[IntVec], a: &[usize], b: &[usize]) -> bool {
    let n = rays.first().map_or(0, |r| r.len());
    let mut lp = LinearProgram::new(n);
    let row = |i: usize| -> Vec<BigRational> { rays[i].iter().map(|x| BigRational::from_integer(x.clone())).collect() };
    for &i in a {
        if b.contains(&i) {
            lp.add(row(i), Cmp::Eq, q(0));
        } else {
            lp.add(row(i), Cmp::Ge, q(1));
        }
    }
    for &i in b {
        if !a.contains(&i) {
            lp.add(row(i), Cmp::Le, q(-1));
        }
    }
    !matches!(lp.solve(), LpOutcome::Infeasible)
}

pub fn has_torus_factor(fan: &Fan) -> bool {
    if fan.rays.is_empty() {
        return true;
    }
    rank(&IntegerMatrix::from_rows(fan.dim, &fan.rays)) < fan.dim
}

/// Codimension-2 faces of a full-dimensional cone, adjacent when they lie in
/// a common facet (their union then spans that facet).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceGraph {
    pub vertices: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl FaceGraph {
    /// True when the graph is one cycle through every vertex (length ≥ 3).
    pub fn is_single_cycle(&self) -> bool {
        let t = self.vertices.len();
        if t < 3 || self.edges.len() != t {
            return false;
        }
        let mut adj = vec![Vec::new(); t];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        if adj.iter().any(|x| x.len() != 2) {
            return false;
        }
        let (mut prev, mut cur, mut steps) = (0usize, adj[0][0], 1usize);
        while cur != 0 {
            let nxt = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            prev = cur;
            cur = nxt;
            steps += 1;
        }
        steps == t
    }
}

pub fn codim2_ray_graph(sigma: &Cone) -> Result<FaceGraph, FanError> {
    if !sigma.is_full_dimensional() {
        return Err(FanError::DimensionError(sigma.dim, sigma.ambient));
    }
    let n = sigma.ambient;
    let vertices: Vec<Vec<usize>> = faces_of_cone(sigma)
        .into_iter()
        .filter(|f| n >= 2 && sigma.face_dim(f) == n - 2)
        .collect();
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let shared = sigma.facets.iter().any(|f| {
                vertices[i].iter().chain(&vertices[j]).all(|x| f.binary_search(x).is_ok())
            });
            if shared {
                edges.push((i, j));
            }
        }
    }
    Ok(FaceGraph { vertices, edges })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuasiProjectivity {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for QuasiProjectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            QuasiProjectivity::Yes => "yes",
            QuasiProjectivity::No => "no",
            QuasiProjectivity::Unknown => "unknown",
        };
        write!(f, "{s}")
    }
}

/// Complete iff every maximal cone is full-dimensional and every wall lies in
/// exactly two maximal cones.
pub fn is_complete(fan: &Fan) -> bool {
    let n = fan.dim;
    let cones: Vec<Cone> = fan.distinct_cones().iter().map(|c| Cone::new(&fan.rays, c)).collect();
    if cones.is_empty() || cones.iter().any(|c| !c.is_full_dimensional()) {
        return false;
    }
    let mut walls: HashMap<Vec<usize>, usize> = HashMap::new();
    for c in &cones {
        for f in c.facets() {
            *walls.entry(f.clone()).or_default() += 1;
        }
    }
    n >= 1 && walls.values().all(|&k| k == 2)
}

/// Searches for a strictly convex support function: one linear functional
/// m_σ per maximal cone agreeing with the values a_ρ on its rays and
/// exceeding them by a slack t ≤ 1 on all other rays; t > 0 means yes.
pub fn is_quasiprojective(fan: &Fan) -> QuasiProjectivity {
    let cones = fan.distinct_cones();
    if cones.len() <= 1 {
        return QuasiProjectivity::Yes;
    }
    let n = fan.dim;
    let k = fan.rays.len();
    let nv = k + cones.len() * n + 1;
    let t = nv - 1;
    let mut lp = LinearProgram::new(nv);
    for (ci, c) in cones.iter().enumerate() {
        for rho in 0..k {
            let mut terms: Vec<(usize, BigRational)> = (0..n)
                .map(|j| (k + ci * n + j, BigRational::from_integer(fan.rays[rho][j].clone())))
                .collect();
            terms.push((rho, q(-1)));
            if c.contains(&rho) {
                lp.add_sparse(&terms, Cmp::Eq, q(0));
            } else {
                terms.push((t, q(-1)));
                lp.add_sparse(&terms, Cmp::Ge, q(0));
            }
        }
    }
    lp.add_sparse(&[(t, q(1))], Cmp::Le, q(1));
    let mut obj = vec![q(0); nv];
    obj[t] = q(1);
    lp.maximize(obj);
    match lp.solve() {
        LpOutcome::Optimal { value, .. } if value.is_positive() => QuasiProjectivity::Yes,
        _ if is_complete(fan) => QuasiProjectivity::No,
        _ => QuasiProjectivity::Unknown,
    }
}

fn rational_inverse(m: &IntegerMatrix) -> Option<Vec<Vec<BigRational>>> {
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| BigRational::from_integer(m.get(i, j).clone())).collect();
            row.extend((0..n).map(|j| if i == j { q(1) } else { q(0) }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x = &*x / &piv;
        }
        let prow = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Aut_Σ: lattice automorphisms permuting the rays and the maximal cones.
pub fn automorphism_group(fan: &Fan) -> Result<MatrixGroup, FanError> {
    let rep = validate_fan(fan);
    if !rep.is_valid() {
        return Err(FanError::Invalid(rep));
    }
    if has_torus_factor(fan) {
        return Err(FanError::TorusFactor);
    }
    let n = fan.dim;
    let k = fan.rays.len();
    let mut basis_idx: Vec<usize> = Vec::new();
    for i in 0..k {
        let mut trial: Vec<IntVec> = basis_idx.iter().map(|&j| fan.rays[j].clone()).collect();
        trial.push(fan.rays[i].clone());
        if rank(&IntegerMatrix::from_rows(n, &trial)) == trial.len() {
            basis_idx.push(i);
        }
        if basis_idx.len() == n {
            break;
        }
    }
    let bcols: Vec<IntVec> = basis_idx.iter().map(|&j| fan.rays[j].clone()).collect();
    let binv = rational_inverse(&IntegerMatrix::from_columns(n, &bcols)).expect("basis rays are independent");
    let ray_index: HashMap<&IntVec, usize> = fan.rays.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let cone_set: HashSet<Vec<usize>> = fan.distinct_cones().into_iter().collect();

    let mut elements: Vec<IntegerMatrix> = Vec::new();
    let mut tuple: Vec<usize> = Vec::new();
    fn injective_tuples(k: usize, n: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == n {
            f(cur);
            return;
        }
        for i in 0..k {
            if !cur.contains(&i) {
                cur.push(i);
                injective_tuples(k, n, cur, f);
                cur.pop();
            }
        }
    }
    injective_tuples(k, n, &mut tuple, &mut |t: &[usize]| {
        // M = [images] · B^{-1}
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut s = q(0);
                for (l, &ti) in t.iter().enumerate() {
                    let x = &fan.rays[ti][i];
                    if !x.is_zero() {
                        s += BigRational::from_integer(x.clone()) * &binv[l][j];
                    }
                }
                if !s.is_integer() {
                    return;
                }
                entries.push(s.to_integer());
            }
        }
        let m = IntegerMatrix::new(n, n, entries);
        if !is_unimodular(&m) {
            return;
        }
        let mut perm = Vec::with_capacity(k);
        for r in &fan.rays {
            match ray_index.get(&m.mul_vec(r)) {
                Some(&j) => perm.push(j),
                None => return,
            }
        }
        for c in &cone_set {
            let mut img: Vec<usize> = c.iter().map(|&i| perm[i]).collect();
            img.sort_unstable();
            if !cone_set.contains(&img) {
                return;
            }
        }
        elements.push(m);
    });
    elements.sort();
    let mut gens: Vec<IntegerMatrix> = Vec::new();
    let mut span: HashSet<IntegerMatrix> = HashSet::new();
    span.insert(IntegerMatrix::identity(n));
    for e in &elements {
        if !span.contains(e) {
            gens.push(e.clone());
            let g = generate_closure(&gens, elements.len().max(1))?;
            span = g.elements.iter().cloned().collect();
        }
    }
    if gens.is_empty() {
        return Ok(generate_closure(&[IntegerMatrix::identity(n)], 1)?);
    }
    Ok(generate_closure(&gens, elements.len())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::ivec;
    use crate::symgrp::{identify_isomorphism_type, IsoType};

    fn cone(rays: &[&[i64]]) -> Cone {
        let r: Vec<IntVec> = rays.iter().map(|v| ivec(v)).collect();
        let idx: Vec<usize> = (0..r.len()).collect();
        Cone::new(&r, &idx)
    }

    #[test]
    fn validation_examples() {
        let ok = Fan::from_i64(2, &[vec![1, 0], vec![0, 1]], vec![vec![0, 1]]);
        assert!(validate_fan(&ok).is_valid());
        let line = Fan::from_i64(2, &[vec![1, 0], vec![-1, 0]], vec![vec![0, 1]]);
        assert_eq!(validate_fan(&line).violations, vec![FanViolation::NotStronglyConvex { cone: 0 }]);
        let np = Fan::from_i64(2, &[vec![2, 0]], vec![vec![0]]);
        assert_eq!(validate_fan(&np).violations, vec![FanViolation::NonPrimitiveRay { ray: 0 }]);
        let overlap = Fan::from_i64(2, &[vec![1, 0], vec![0, 1], vec![1, 1]], vec![vec![0, 1], vec![0, 2]]);
        assert!(!validate_fan(&overlap).is_valid());
    }

    #[test]
    fn face_counts() {
        assert_eq!(faces_of_cone(&cone(&[&[1, 0], &[0, 1]])).len(), 4);
        assert_eq!(faces_of_cone(&cone(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).len(), 8);
        let sq = cone(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 1], &[0, 0, 1]]);
        assert_eq!(sq.facets().len(), 4);
        let faces = faces_of_cone(&sq);
        assert_eq!(faces.iter().filter(|f| sq.face_dim(f) == 1).count(), 4);
        assert_eq!(faces.len(), 10);
    }

    #[test]
    fn graphs() {
        let simp = cone(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let g = codim2_ray_graph(&simp).unwrap();
        assert_eq!(g.vertices.len(), 3);
        assert!(g.is_single_cycle());
        let sq = cone(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 1], &[0, 0, 1]]);
        let g = codim2_ray_graph(&sq).unwrap();
        assert_eq!(g.vertices.len(), 4);
        assert!(g.is_single_cycle());
        let flat = cone(&[&[1, 0, 0], &[0, 1, 0]]);
        assert!(codim2_ray_graph(&flat).is_err());
        let two = codim2_ray_graph(&cone(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(two.vertices, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn torus_factor() {
        let ex = Fan::from_i64(3, &[vec![1, 0, -1], vec![0, -1, 1], vec![-1, 1, 0]], vec![vec![0, 1, 2]]);
        // these three rays sum to zero, so they span a rank-2 lattice
        assert!(has_torus_factor(&ex));
        assert!(has_torus_factor(&Fan::from_i64(3, &[vec![1, 0, 0]], vec![vec![0]])));
        assert!(has_torus_factor(&Fan::new(3, vec![], vec![])));
        let ex8 = Fan::from_i64(3, &[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0]], vec![vec![0, 1, 2]]);
        assert!(!has_torus_factor(&ex8));
    }

    #[test]
    fn quasiprojectivity() {
        let single = Fan::from_i64(2, &[vec![1, 0], vec![0, 1]], vec![vec![0, 1]]);
        assert_eq!(is_quasiprojective(&single), QuasiProjectivity::Yes);
        let p2 = Fan::from_i64(2, &[vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert!(is_complete(&p2));
        assert_eq!(is_quasiprojective(&p2), QuasiProjectivity::Yes);
        let rays_only = Fan::rays_only(2, vec![ivec(&[1, 0]), ivec(&[0, 1])]);
        assert_eq!(is_quasiprojective(&rays_only), QuasiProjectivity::Yes);
    }

    #[test]
    fn non_projective_complete_fan() {
        // the classical complete non-projective 3-fold fan: a triangular prism
        // subdivision with twisted side squares
        let rays: Vec<Vec<i64>> = vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![-1, -1, 0],
            vec![1, 0, 1],
            vec![0, 1, 1],
            vec![-1, -1, 1],
            vec![0, 0, -1],
        ];
        // top cap split as cones over triangles, walls twisted cyclically
        let cones = vec![
            vec![3, 4, 5],
            vec![0, 1, 3],
            vec![1, 3, 4],
            vec![1, 2, 4],
            vec![2, 4, 5],
            vec![2, 0, 5],
            vec![0, 5, 3],
            vec![0, 1, 6],
            vec![1, 2, 6],
            vec![2, 0, 6],
        ];
        let fan = Fan::from_i64(3, &rays, cones);
        assert!(validate_fan(&fan).is_valid(), "{}", validate_fan(&fan));
        assert!(is_complete(&fan));
        assert_eq!(is_quasiprojective(&fan), QuasiProjectivity::No);
        // flipping one diagonal breaks the cyclic twist
        let mut cones = fan.max_cones.clone();
        cones[5] = vec![2, 0, 3];
        cones[6] = vec![2, 3, 5];
        let untwisted = Fan::new(3, fan.rays.clone(), cones);
        assert!(validate_fan(&untwisted).is_valid());
        assert_eq!(is_quasiprojective(&untwisted), QuasiProjectivity::Yes);
    }

    #[test]
    fn automorphisms() {
        let simp = Fan::from_i64(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], vec![vec![0, 1, 2]]);
        let aut = automorphism_group(&simp).unwrap();
        assert_eq!(identify_isomorphism_type(aut.group()), IsoType::Dihedral(6));
        let ex8 = Fan::from_i64(3, &[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0]], vec![vec![0, 1, 2]]);
        assert_eq!(automorphism_group(&ex8).unwrap().order(), 6);
        let p2 = Fan::from_i64(2, &[vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        // permutations of the three rays; -I does not preserve them
        assert_eq!(identify_isomorphism_type(automorphism_group(&p2).unwrap().group()), IsoType::Dihedral(6));
        let ex7 = Fan::from_i64(3, &[vec![1, 0, -1], vec![0, -1, 1], vec![-1, 1, 0]], vec![vec![0, 1, 2]]);
        assert!(automorphism_group(&ex7).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"dim":2,"rays":[[1,0],[0,1]],"max_cones":[[0,1]]}"#;
        let fan = Fan::from_json(text).unwrap();
        assert_eq!(fan.to_json(), text);
    }

    #[test]
    fn membership() {
        let c = cone(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 1], &[0, 0, 1]]);
        assert!(c.contains(&ivec(&[1, 1, 2])));
        assert!(!c.contains(&ivec(&[2, 0, 1])));
        let flat = cone(&[&[1, 0, 0], &[0, 1, 0]]);
        assert!(flat.contains(&ivec(&[3, 4, 0])));
        assert!(!flat.contains(&ivec(&[1, 1, 1])));
    }
}
