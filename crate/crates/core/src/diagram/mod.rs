//! Log-log (r_c, λ) exclusion diagram: overlay loading and SVG/CSV output.

mod overlay;
mod render;

pub use overlay::{
    load_overlay, load_overlays, parse_overlay_csv, OverlayBound, OverlayKind, OverlaySample,
    OVERLAY_HEADER,
};
pub use render::{
    curves_csv, grw_marker, load_markers, render_diagram, DiagramSpec, Marker, RenderedDiagram,
    DEFAULT_LAMBDA_RANGE, GRW_LAMBDA_PER_S, GRW_RC_M,
};
