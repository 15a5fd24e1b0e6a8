//! Dimension bookkeeping over a decorated dual-graph description of a
//! stable curve with a cyclic p-group action: the smooth-curve
//! dimension formula, the two sheaf dimension counts at the nodes, and
//! the assembled stable-curve dimension with relevability corrections.
//!
//! The input is orbit-level data (one representative per orbit); the
//! JSON schema is strict and unknown fields are rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::node::{classify_relevability_data, NodeLocalData, RelevabilityClass};
use crate::series::is_prime;

/// A conductor or different bound that may be infinite; serialized as
/// an integer or the string "inf".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extended {
    Finite(u64),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<u64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(v) => s.serialize_u64(*v),
            Extended::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(Extended::Finite)
                .ok_or_else(|| D::Error::custom("conductor must be a non-negative integer")),
            serde_json::Value::String(s) if s == "inf" => Ok(Extended::Infinite),
            other => Err(D::Error::custom(format!(
                "expected integer or \"inf\", got {other}"
            ))),
        }
    }
}

impl std::fmt::Display for Extended {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

/// One orbit of irreducible components of the normalization.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ComponentOrbit {
    pub id: String,
    /// p_a of the quotient of a representative component.
    pub quotient_genus: u64,
    pub component_genus: u64,
    /// Order of the component stabilizer.
    pub stabilizer_order: u64,
    /// Order of the inertia (pointwise stabilizer) of the component.
    pub inertia_order: u64,
}

/// One orbit of smooth ramification points.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RamificationOrbit {
    /// Id of the component orbit carrying the point.
    pub component: String,
    pub different: u64,
    pub stabilizer_order: u64,
    pub image_group_order: u64,
}

/// One orbit of nodes, with branch-wise local data. The first entry of
/// every pair is the x-branch.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SingularOrbit {
    pub branch_components: (String, String),
    pub conductors: (Extended, Extended),
    pub differents: (u64, u64),
    /// Branch-wise image orders of the stabilizer action.
    pub image_orders: (u64, u64),
    /// Order of the node stabilizer.
    pub stabilizer_order: u64,
    pub permutes_branches: bool,
    /// Optional supplied class; always re-derived and compared.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relevability: Option<String>,
}

impl SingularOrbit {
    /// Branch data extracted from an explicit node action; all local
    /// invariants are recomputed from series.
    pub fn from_action(
        action: &crate::node::CyclicNodeAction,
        branch_components: (String, String),
    ) -> Result<SingularOrbit> {
        let profile = action.profile()?;
        let ext = |c: Option<u64>| c.map(Extended::Finite).unwrap_or(Extended::Infinite);
        Ok(SingularOrbit {
            branch_components,
            conductors: (ext(profile.conductors.0), ext(profile.conductors.1)),
            differents: profile.differents,
            image_orders: profile.image_orders,
            stabilizer_order: profile.group_order,
            permutes_branches: false,
            relevability: None,
        })
    }

    fn local_data(&self) -> NodeLocalData {
        NodeLocalData {
            conductors: (self.conductors.0.finite(), self.conductors.1.finite()),
            differents: self.differents,
            image_orders: self.image_orders,
            group_order: self.stabilizer_order,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GlobalFlags {
    pub all_stabilizers_cyclic: bool,
    pub components_genus_ge_2: bool,
    pub action_free_on_dense_open: bool,
}

/// A decorated dual graph of (C, G); orbit-level input for the global
/// dimension formulas.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GlobalCurveSpec {
    pub p: u64,
    pub group_order: u64,
    pub components: Vec<ComponentOrbit>,
    pub ramification_orbits: Vec<RamificationOrbit>,
    pub singular_orbits: Vec<SingularOrbit>,
    pub flags: GlobalFlags,
}

fn relevability_name(c: RelevabilityClass) -> &'static str {
    match c {
        RelevabilityClass::Unconditional => "unconditional",
        RelevabilityClass::Conditional => "conditional",
        RelevabilityClass::NonRelevable => "non-relevable",
    }
}

impl GlobalCurveSpec {
    pub fn from_json_str(s: &str) -> Result<GlobalCurveSpec> {
        let spec: GlobalCurveSpec =
            serde_json::from_str(s).map_err(|e| Error::data(format!("invalid curve spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json_string(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::internal(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::data(format!("p = {} is not prime", self.p)));
        }
        let mut q = self.group_order;
        if q == 0 {
            return Err(Error::data("group order 0".to_string()));
        }
        while q % self.p == 0 {
            q /= self.p;
        }
        if q != 1 {
            return Err(Error::data(format!(
                "group order {} is not a power of {}",
                self.group_order, self.p
            )));
        }
        let ids: Vec<&str> = self.components.iter().map(|c| c.id.as_str()).collect();
        for c in &self.components {
            if c.inertia_order == 0
                || c.stabilizer_order == 0
                || c.stabilizer_order % c.inertia_order != 0
            {
                return Err(Error::data(format!(
                    "component {}: inertia order {} must divide stabilizer order {}",
                    c.id, c.inertia_order, c.stabilizer_order
                )));
            }
            if self.group_order % c.stabilizer_order != 0 {
                return Err(Error::data(format!(
                    "component {}: stabilizer order {} does not divide the group order",
                    c.id, c.stabilizer_order
                )));
            }
        }
        for r in &self.ramification_orbits {
            if !ids.contains(&r.component.as_str()) {
                return Err(Error::data(format!(
                    "ramification orbit refers to unknown component {}",
                    r.component
                )));
            }
            if r.image_group_order == 0 || r.stabilizer_order % r.image_group_order != 0 {
                return Err(Error::data(format!(
                    "ramification orbit on {}: image order {} must divide stabilizer order {}",
                    r.component, r.image_group_order, r.stabilizer_order
                )));
            }
            if (r.different == 0) != (r.image_group_order == 1) {
                return Err(Error::data(format!(
                    "ramification orbit on {}: different {} inconsistent with image order {}",
                    r.component, r.different, r.image_group_order
                )));
            }
        }
        for (i, s) in self.singular_orbits.iter().enumerate() {
            if s.permutes_branches {
                return Err(Error::hypothesis(format!(
                    "singular orbit {i} permutes the branches; only non-permuting node \
                     stabilizers are supported (pass to the subgroup fixing the branches)"
                )));
            }
            for id in [&s.branch_components.0, &s.branch_components.1] {
                if !ids.contains(&id.as_str()) {
                    return Err(Error::data(format!(
                        "singular orbit {i} refers to unknown component {id}"
                    )));
                }
            }
            if s.stabilizer_order == 0 || self.group_order % s.stabilizer_order != 0 {
                return Err(Error::data(format!(
                    "singular orbit {i}: stabilizer order {} does not divide the group order",
                    s.stabilizer_order
                )));
            }
            for (b, (c, o)) in [
                (0, (s.conductors.0, s.image_orders.0)),
                (1, (s.conductors.1, s.image_orders.1)),
            ] {
                if o == 0 || s.stabilizer_order % o != 0 {
                    return Err(Error::data(format!(
                        "singular orbit {i}, branch {b}: image order {o} must divide the \
                         stabilizer order"
                    )));
                }
                if (c == Extended::Infinite) != (o == 1) {
                    return Err(Error::data(format!(
                        "singular orbit {i}, branch {b}: conductor {c} inconsistent with \
                         image order {o}"
                    )));
                }
            }
            let derived = relevability_name(classify_relevability_data(&s.local_data())?);
            if let Some(supplied) = &s.relevability {
                if supplied != derived {
                    return Err(Error::data(format!(
                        "singular orbit {i}: supplied relevability {supplied} contradicts the \
                         derived class {derived}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Relevability classes of all singular orbits, re-derived from the
    /// numeric local data.
    pub fn relevability_classes(&self) -> Result<Vec<RelevabilityClass>> {
        self.singular_orbits
            .iter()
            .map(|s| classify_relevability_data(&s.local_data()))
            .collect()
    }
}

/// The assembled dimension counts, with per-field provenance notes.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DimensionReport {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dim_smooth_global: Option<i64>,
    #[serde(rename = "dim_H1_local_global_term")]
    pub dim_h1_local_global_term: i64,
    #[serde(rename = "F_dimension")]
    pub f_dimension: u64,
    #[serde(rename = "G_dimension")]
    pub g_dimension: u64,
    pub unconditional_count: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dim_ext1_total: Option<i64>,
    pub hypotheses_checked: Vec<String>,
    pub warnings: Vec<String>,
    pub notes: BTreeMap<String, String>,
}

impl DimensionReport {
    pub fn to_json_string(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::internal(e.to_string()))
    }

    pub fn from_json_str(s: &str) -> Result<DimensionReport> {
        serde_json::from_str(s).map_err(|e| Error::data(format!("invalid report: {e}")))
    }
}

/// 3 p_a(C/G) - 3 + sum over ramification orbits of
/// floor(2 d / |D|), for a connected smooth curve (no nodes) with
/// cyclic stabilizers and quotient genus at least 2.
pub fn dim_ext1_smooth_curve(spec: &GlobalCurveSpec) -> Result<i64> {
    spec.validate()?;
    if !spec.singular_orbits.is_empty() {
        return Err(Error::hypothesis(
            "smooth-curve formula applied to a curve with nodes".to_string(),
        ));
    }
    if !spec.flags.all_stabilizers_cyclic {
        return Err(Error::hypothesis(
            "smooth-curve formula needs cyclic stabilizers".to_string(),
        ));
    }
    let [c] = spec.components.as_slice() else {
        return Err(Error::hypothesis(
            "smooth-curve formula needs exactly one component orbit".to_string(),
        ));
    };
    if c.quotient_genus < 2 {
        return Err(Error::hypothesis(format!(
            "quotient genus {} < 2: stability hypothesis fails",
            c.quotient_genus
        )));
    }
    let mut total = 3 * c.quotient_genus as i64 - 3;
    for r in &spec.ramification_orbits {
        total += (2 * r.different / r.stabilizer_order) as i64;
    }
    Ok(total)
}

fn branch_pairs(s: &SingularOrbit) -> [(Extended, u64, u64); 2] {
    [
        (s.conductors.0, s.differents.0, s.image_orders.0),
        (s.conductors.1, s.differents.1, s.image_orders.1),
    ]
}

/// Number of branches at nodes where the conductor is infinite or
/// m + 1 = 0 mod p.
pub fn f_sheaf_dimension(spec: &GlobalCurveSpec) -> Result<u64> {
    spec.validate()?;
    let mut count = 0;
    for s in &spec.singular_orbits {
        for (c, _, _) in branch_pairs(s) {
            match c {
                Extended::Infinite => count += 1,
                Extended::Finite(m) if (m + 1) % spec.p == 0 => count += 1,
                _ => {}
            }
        }
    }
    Ok(count)
}

/// Number of branches at nodes where 2 d + 1 is nonzero mod the branch
/// image order, or the image is a proper subgroup of the stabilizer.
pub fn g_sheaf_dimension(spec: &GlobalCurveSpec) -> Result<u64> {
    spec.validate()?;
    let mut count = 0;
    for s in &spec.singular_orbits {
        for (_, d, image) in branch_pairs(s) {
            if (2 * d + 1) % image != 0 || image != s.stabilizer_order {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// The full stable-curve dimension:
/// 2 |nodes| + sum (3 p_a(C_b/G) - 3) + sum floor(2 d / |D|)
/// - (branch count from g_sheaf_dimension) + (unconditional nodes).
/// Requires components of genus >= 2 or an action free on a dense
/// open; anything else is refused rather than approximated.
pub fn dim_ext1_stable_curve(spec: &GlobalCurveSpec) -> Result<DimensionReport> {
    spec.validate()?;
    let mut hypotheses = Vec::new();
    let mut warnings = Vec::new();
    let mut notes = BTreeMap::new();
    if !spec.flags.all_stabilizers_cyclic {
        return Err(Error::hypothesis(
            "the dimension formulas need cyclic stabilizers".to_string(),
        ));
    }
    hypotheses.push("all stabilizers cyclic".to_string());
    if !spec.flags.components_genus_ge_2 && !spec.flags.action_free_on_dense_open {
        return Err(Error::hypothesis(
            "need components of genus >= 2 or an action free on a dense open; outside that \
             regime the vanishing of the extra local term is not guaranteed"
                .to_string(),
        ));
    }
    hypotheses.push(if spec.flags.components_genus_ge_2 {
        "components of genus >= 2".to_string()
    } else {
        "action free on a dense open".to_string()
    });
    hypotheses.push("no node stabilizer permutes branches".to_string());
    hypotheses.push("relevability re-derived from branch data".to_string());

    let local = 2 * spec.singular_orbits.len() as i64;
    notes.insert(
        "dim_H1_local_global_term".to_string(),
        "two local deformation directions per node orbit".to_string(),
    );
    let comp: i64 = spec
        .components
        .iter()
        .map(|c| 3 * c.quotient_genus as i64 - 3)
        .sum();
    let ram: i64 = spec
        .ramification_orbits
        .iter()
        .map(|r| (2 * r.different / r.stabilizer_order) as i64)
        .sum();
    let f_dim = f_sheaf_dimension(spec)?;
    notes.insert(
        "F_dimension".to_string(),
        "branches with infinite conductor or conductor = -1 mod p".to_string(),
    );
    let g_dim = g_sheaf_dimension(spec)?;
    notes.insert(
        "G_dimension".to_string(),
        "branches with 2 different + 1 nonzero mod the image order, or proper image".to_string(),
    );
    let unconditional = spec
        .relevability_classes()?
        .iter()
        .filter(|c| **c == RelevabilityClass::Unconditional)
        .count() as u64;
    notes.insert(
        "unconditional_count".to_string(),
        "node orbits whose lift exists for every smoothing parameter".to_string(),
    );

    let dim_smooth_global = if spec.singular_orbits.is_empty() {
        notes.insert(
            "dim_smooth_global".to_string(),
            "component and ramification terms only (no nodes)".to_string(),
        );
        Some(comp + ram)
    } else {
        None
    };

    let total = local + comp + ram - g_dim as i64 + unconditional as i64;
    notes.insert(
        "dim_ext1_total".to_string(),
        "local node term + component term + ramification term - branch correction \
         + unconditional node count"
            .to_string(),
    );
    if total < 0 {
        warnings.push(format!(
            "negative total {total}: the decorations are mutually inconsistent"
        ));
    }
    Ok(DimensionReport {
        dim_smooth_global,
        dim_h1_local_global_term: local,
        f_dimension: f_dim,
        g_dimension: g_dim,
        unconditional_count: unconditional,
        dim_ext1_total: Some(total),
        hypotheses_checked: hypotheses,
        warnings,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::node::CyclicNodeAction;

    fn component(id: &str, qg: u64) -> ComponentOrbit {
        ComponentOrbit {
            id: id.to_string(),
            quotient_genus: qg,
            component_genus: 2 * qg,
            stabilizer_order: 3,
            inertia_order: 1,
        }
    }

    fn flags() -> GlobalFlags {
        GlobalFlags {
            all_stabilizers_cyclic: true,
            components_genus_ge_2: true,
            action_free_on_dense_open: false,
        }
    }

    #[test]
    fn smooth_formula_examples() {
        let spec = GlobalCurveSpec {
            p: 3,
            group_order: 3,
            components: vec![component("a", 2)],
            ramification_orbits: vec![RamificationOrbit {
                component: "a".to_string(),
                different: 4,
                stabilizer_order: 3,
                image_group_order: 3,
            }],
            singular_orbits: vec![],
            flags: flags(),
        };
        assert_eq!(dim_ext1_smooth_curve(&spec).unwrap(), 5);
        let bare = GlobalCurveSpec {
            ramification_orbits: vec![],
            ..spec.clone()
        };
        assert_eq!(dim_ext1_smooth_curve(&bare).unwrap(), 3);
        let two = GlobalCurveSpec {
            p: 2,
            group_order: 2,
            components: vec![ComponentOrbit {
                id: "a".to_string(),
                quotient_genus: 3,
                component_genus: 5,
                stabilizer_order: 2,
                inertia_order: 1,
            }],
            ramification_orbits: vec![
                RamificationOrbit {
                    component: "a".to_string(),
                    different: 2,
                    stabilizer_order: 2,
                    image_group_order: 2,
                },
                RamificationOrbit {
                    component: "a".to_string(),
                    different: 6,
                    stabilizer_order: 2,
                    image_group_order: 2,
                },
            ],
            singular_orbits: vec![],
            flags: flags(),
        };
        assert_eq!(dim_ext1_smooth_curve(&two).unwrap(), 14);
    }

    fn node_orbit(
        cx: Extended,
        cy: Extended,
        dx: u64,
        dy: u64,
        ix: u64,
        iy: u64,
    ) -> SingularOrbit {
        SingularOrbit {
            branch_components: ("a".to_string(), "b".to_string()),
            conductors: (cx, cy),
            differents: (dx, dy),
            image_orders: (ix, iy),
            stabilizer_order: 3,
            permutes_branches: false,
            relevability: None,
        }
    }

    fn one_node_spec(orbit: SingularOrbit) -> GlobalCurveSpec {
        GlobalCurveSpec {
            p: 3,
            group_order: 3,
            components: vec![component("a", 2), component("b", 2)],
            ramification_orbits: vec![],
            singular_orbits: vec![orbit],
            flags: flags(),
        }
    }

    #[test]
    fn sheaf_dimension_examples() {
        use Extended::{Finite, Infinite};
        let s22 = one_node_spec(node_orbit(Finite(2), Finite(2), 6, 6, 3, 3));
        assert_eq!(f_sheaf_dimension(&s22).unwrap(), 2);
        assert_eq!(g_sheaf_dimension(&s22).unwrap(), 2);
        let s11 = one_node_spec(node_orbit(Finite(1), Finite(1), 4, 4, 3, 3));
        assert_eq!(f_sheaf_dimension(&s11).unwrap(), 0);
        assert_eq!(g_sheaf_dimension(&s11).unwrap(), 0);
        let sinf = one_node_spec(node_orbit(Infinite, Finite(1), 0, 4, 1, 3));
        assert_eq!(f_sheaf_dimension(&sinf).unwrap(), 1);
        // Proper image on both branches makes both branches count.
        let mut proper = node_orbit(Finite(1), Finite(1), 4, 4, 3, 3);
        proper.stabilizer_order = 9;
        let mut spec9 = one_node_spec(proper);
        spec9.group_order = 9;
        assert_eq!(g_sheaf_dimension(&spec9).unwrap(), 2);
    }

    fn worked_example(m: u64, d: u64) -> GlobalCurveSpec {
        GlobalCurveSpec {
            p: 3,
            group_order: 3,
            components: vec![component("a", 2), component("b", 2)],
            ramification_orbits: vec![
                RamificationOrbit {
                    component: "a".to_string(),
                    different: d,
                    stabilizer_order: 3,
                    image_group_order: 3,
                },
                RamificationOrbit {
                    component: "b".to_string(),
                    different: d,
                    stabilizer_order: 3,
                    image_group_order: 3,
                },
            ],
            singular_orbits: vec![node_orbit(
                Extended::Finite(m),
                Extended::Finite(m),
                d,
                d,
                3,
                3,
            )],
            flags: flags(),
        }
    }

    #[test]
    fn worked_global_examples() {
        let fifteen = worked_example(2, 6);
        let report = dim_ext1_stable_curve(&fifteen).unwrap();
        assert_eq!(report.dim_ext1_total, Some(15));
        assert_eq!(report.unconditional_count, 1);
        assert_eq!(report.g_dimension, 2);
        let twelve = worked_example(1, 4);
        let report = dim_ext1_stable_curve(&twelve).unwrap();
        assert_eq!(report.dim_ext1_total, Some(12));
        assert_eq!(report.unconditional_count, 0);
        assert_eq!(report.g_dimension, 0);
    }

    #[test]
    fn worked_examples_from_series() {
        // The same two totals with node data extracted from explicit
        // actions rather than numeric decorations.
        for (m, d, expect) in [(2u64, 6u64, 15i64), (1, 4, 12)] {
            let action = CyclicNodeAction::standard_node_action(3, Some(m), Some(m), 60).unwrap();
            let orbit = SingularOrbit::from_action(
                &action,
                ("a".to_string(), "b".to_string()),
            )
            .unwrap();
            assert_eq!(orbit.differents, (d, d));
            let mut spec = worked_example(m, d);
            spec.singular_orbits = vec![orbit];
            assert_eq!(
                dim_ext1_stable_curve(&spec).unwrap().dim_ext1_total,
                Some(expect)
            );
        }
    }

    #[test]
    fn node_free_consistency() {
        let spec = GlobalCurveSpec {
            p: 3,
            group_order: 3,
            components: vec![component("a", 2)],
            ramification_orbits: vec![RamificationOrbit {
                component: "a".to_string(),
                different: 4,
                stabilizer_order: 3,
                image_group_order: 3,
            }],
            singular_orbits: vec![],
            flags: flags(),
        };
        let report = dim_ext1_stable_curve(&spec).unwrap();
        assert_eq!(report.dim_smooth_global, Some(dim_ext1_smooth_curve(&spec).unwrap()));
        assert_eq!(
            report.dim_ext1_total,
            Some(dim_ext1_smooth_curve(&spec).unwrap())
        );
    }

    #[test]
    fn monotone_node_addition() {
        // Adding an unconditional node orbit with fresh branch points
        // changes the total by 2 + floors - branch corrections + 1.
        let base = worked_example(2, 6);
        let base_total = dim_ext1_stable_curve(&base).unwrap().dim_ext1_total.unwrap();
        let mut bigger = base.clone();
        bigger.singular_orbits.push(node_orbit(
            Extended::Finite(5),
            Extended::Finite(5),
            12,
            12,
            3,
            3,
        ));
        bigger.ramification_orbits.push(RamificationOrbit {
            component: "a".to_string(),
            different: 12,
            stabilizer_order: 3,
            image_group_order: 3,
        });
        bigger.ramification_orbits.push(RamificationOrbit {
            component: "b".to_string(),
            different: 12,
            stabilizer_order: 3,
            image_group_order: 3,
        });
        let new_total = dim_ext1_stable_curve(&bigger).unwrap().dim_ext1_total.unwrap();
        // (2 * 12 + 1) = 25, 25 mod 3 = 1 != 0: both branch corrections
        // fire; floors are 8 each.
        assert_eq!(new_total - base_total, 2 + 8 + 8 - 2 + 1);
    }

    #[test]
    fn validation_and_refusals() {
        let mut spec = worked_example(2, 6);
        spec.singular_orbits[0].permutes_branches = true;
        assert!(dim_ext1_stable_curve(&spec).unwrap_err().is_hypothesis_violation());
        let mut spec = worked_example(2, 6);
        spec.flags.components_genus_ge_2 = false;
        assert!(dim_ext1_stable_curve(&spec).unwrap_err().is_hypothesis_violation());
        let mut spec = worked_example(2, 6);
        spec.singular_orbits[0].relevability = Some("non-relevable".to_string());
        assert!(dim_ext1_stable_curve(&spec).is_err());
        let mut spec = worked_example(2, 6);
        spec.singular_orbits[0].relevability = Some("unconditional".to_string());
        assert_eq!(dim_ext1_stable_curve(&spec).unwrap().dim_ext1_total, Some(15));
    }

    #[test]
    fn json_round_trip() {
        let spec = worked_example(2, 6);
        let text = spec.to_json_string().unwrap();
        let back = GlobalCurveSpec::from_json_str(&text).unwrap();
        assert_eq!(back, spec);
        // Unknown fields are rejected.
        let bad = text.replace("\"p\": 3", "\"p\": 3, \"extra\": 1");
        assert!(GlobalCurveSpec::from_json_str(&bad).is_err());
        // "inf" conductors survive the trip.
        let inf_spec = one_node_spec(node_orbit(
            Extended::Infinite,
            Extended::Finite(2),
            0,
            6,
            1,
            3,
        ));
        let t = inf_spec.to_json_string().unwrap();
        assert!(t.contains("\"inf\""));
        assert_eq!(GlobalCurveSpec::from_json_str(&t).unwrap(), inf_spec);
        // Report round-trip.
        let report = dim_ext1_stable_curve(&spec).unwrap();
        let rt = DimensionReport::from_json_str(&report.to_json_string().unwrap()).unwrap();
        assert_eq!(rt, report);
    }
}
