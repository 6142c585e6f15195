//! Exact counts of smooth conic pairs over prime fields F_p (p > 3) that
//! close up into Poncelet n-gons, computed two independent ways: Cayley's
//! Hankel-determinant criterion swept over pencils of conics, and torsion
//! censuses of elliptic-curve families via division polynomials. The census
//! module ties the two routes together and checks them against closed forms.

pub mod cayley;
pub mod census;
pub mod conic;
pub mod elliptic;
pub mod field;
pub mod pencil;
pub mod poly;

pub use cayley::{
    cayley_coeffs, cleared_f3, cleared_f4, hankel_f, satisfies_ngon_cayley, CayleyError,
};
pub use census::{
    bridge_check, divisor_counts, expected_total, family_breakdown, family_curve, family_sum,
    gamma3_exact, pencil_ngon_count, render_ratio, CensusError, CensusReport, ExpectedTarget,
    FamilyKind,
};
pub use conic::{
    char_cubic, intersection_type, is_transversal, parse_conic, Conic, ConicError,
    IntersectionType,
};
pub use elliptic::{
    is_ntorsion_x, r_count, r_split, torsion_poly, Curve, CurvePoint, EllipticError, GroupLaw,
    TorsionPoly,
};
pub use field::{is_prime, FieldError, FieldOps, Fp, PrimeField, QuadExt, QuadExtField};
pub use pencil::{
    canonical_params, canonical_pencil, pencil_census, smooth_pair_count, CanonicalParams,
    Pencil, PencilError, PencilParam,
};
pub use poly::{count_roots, gcd, roots, roots_seeded, series_sqrt, Poly, PolyError, TruncatedSeries};
