//! Special functions and free-particle Green's functions in `2 + eps` dimensions.

mod bessel;
mod gamma;
mod green;

pub use bessel::{
    bessel_i, bessel_i_scaled, bessel_ik, bessel_k, bessel_k_scaled, BesselOrder, ScaledIK, BESSEL_ARG_MAX,
    BESSEL_K_ARG_MIN,
};
pub use gamma::{gamma_fn, unit_sphere_area, EULER_GAMMA};
pub use green::{delta_green_leading, green_e, green_zero, swave_green_e, GreenParams};

pub(crate) use bessel::bessel_ik_scaled;
