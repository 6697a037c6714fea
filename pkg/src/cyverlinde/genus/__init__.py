from .fr import (
    FRData,
    MissingFRData,
    NotMultiplicityFree,
    builtin_fr,
    fr_from_dict,
    load_fr_json,
    validate_fr,
)
from .fusion_space import FusionSpace
from .handlebody import (
    DEFAULT_CROSSINGS,
    BasisVector,
    Crossings,
    GenusGElement,
    HandlebodyReport,
    ReductionReport,
    basis_size,
    enumerate_basis,
    from_verlinde,
    fusion_space,
    gen_convolution,
    gen_fusion,
    gen_s,
    gen_sbar,
    identity_element,
    to_verlinde,
    verify_genus_one_reduction,
    verify_handlebody_verlinde,
)
