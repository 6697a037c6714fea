from .evaluate import (
    EvaluatedMap,
    check_equal,
    evaluate,
    generator_matrices,
    genus_word,
    genus_word_report,
    matrix_from_csv,
    matrix_from_json,
    matrix_to_csv,
    matrix_to_json,
    proposition_suite,
)
from .syntax import (
    ARITY,
    GENERATORS,
    ArityError,
    Compose,
    DSLError,
    Gen,
    LexError,
    ParseError,
    Tensor,
    parse,
    structurally_equal,
    tokenize,
    typecheck,
)
