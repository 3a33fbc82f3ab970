"""treesep: tree automata, tree-walking automata, and CNF grammars, with an
exactly verified pipeline from tree-walking separators of obfuscated
grammars back to regular word separators."""

from .bottomup import Dbta, Nta, parse_dbta, parse_nta
from .errors import (
    AlphabetError,
    ArityError,
    FormatError,
    ParseError,
    ResourceError,
    RotationSearchExhausted,
    ShapeError,
    TransitionError,
    TreesepError,
)
from .grammar import (
    CnfGrammar,
    cyk_member,
    derivation_yield,
    derivations,
    generate_words,
    is_valid_derivation,
    parse_grammar,
)
from .obfuscation import kop_dbta, kop_member, kop_nta, kop_oracle, obf_alphabet
from .rotation import (
    ExtractReport,
    RotationWitness,
    comb_dfa,
    comb_normalize,
    extract_separator,
    find_rotation_term,
    is_associative,
    l_equivalent,
    transformation,
    tstar_members,
)
from .trees import (
    PORT,
    RankedAlphabet,
    Tree,
    comb,
    compose,
    encode_xml,
    enumerate_terms,
    format_tree,
    leaf_word,
    parse_tree,
    rotate_at,
)
from .walking import (
    ACCEPT,
    ESCAPE,
    LOOP,
    REJECT,
    Dtwa,
    RunOutcome,
    behavior_compose,
    behavior_of_leaf,
    dfs_from_dfa,
    parse_dtwa,
    to_dbta,
)
from .words import Dfa, SeparatorReport, cfg_dfa_intersection_empty, parse_dfa, verify_separator

__all__ = [name for name in dir() if not name.startswith("_")]
