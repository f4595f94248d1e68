"""braidfib: explicit fibrations of homogeneous braid closure complements.

Builds, validates, and renders the movie of singular fibrations whose total
function fibers the complement of a homogeneous braid closure, and verifies
the Morse-theoretic shape of every fiber against classical invariants.
"""

from .braid import (
    BraidWord,
    ClassicalInvariants,
    HomogeneitySignature,
    MalformedToken,
    IndexOutOfRange,
    MixedSign,
    MissingGenerator,
    NotHomogeneous,
    Permutation,
    classical_invariants,
    homogeneity_signature,
    parse_braid_word,
    underlying_permutation,
)
from .construction import Movie, build_movie, build_timeline, validate_movie

__all__ = [
    "BraidWord",
    "ClassicalInvariants",
    "HomogeneitySignature",
    "MalformedToken",
    "IndexOutOfRange",
    "MixedSign",
    "MissingGenerator",
    "NotHomogeneous",
    "Permutation",
    "Movie",
    "build_movie",
    "build_timeline",
    "classical_invariants",
    "homogeneity_signature",
    "parse_braid_word",
    "underlying_permutation",
    "validate_movie",
]

__version__ = "0.1.0"
