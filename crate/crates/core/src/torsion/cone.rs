use crate::chain::{BasedComplex, ChainError, ChainMap};

/// Label prefix of the shifted source summand in a mapping cone.
pub const CONE_SOURCE_PREFIX: &str = "c.";
/// Label prefix of the target summand in a mapping cone.
pub const CONE_TARGET_PREFIX: &str = "d.";

/// The mapping cone `C[1] (+) D` with differential `[[d_C[1], f], [0, d_D]]`.
///
/// Source generators come first, labelled `c.<x>`, then target generators
/// `d.<y>`. The filtration is kept only when both complexes carry one.
pub fn mapping_cone(f: &ChainMap) -> Result<BasedComplex, ChainError> {
    let source = f.source().shift(1);
    let target = f.target();
    let cross = f.matrix().entries().map(|((i, j), v)| {
        (
            format!("{CONE_SOURCE_PREFIX}{}", f.matrix().rows()[i]),
            format!("{CONE_TARGET_PREFIX}{}", f.matrix().cols()[j]),
            v.clone(),
        )
    });
    let cone = BasedComplex::direct_sum(
        &[(CONE_SOURCE_PREFIX, &source), (CONE_TARGET_PREFIX, target)],
        cross.collect::<Vec<_>>(),
    )?;
    let cone = if source.is_filtered() && target.is_filtered() {
        cone
    } else {
        cone.without_filtration()
    };
    cone.validate()?;
    Ok(cone)
}
