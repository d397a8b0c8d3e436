from .builder import DerivationBuilder
from .deduction import deduction_transform, expand_spse
from .fixtures import (
    IDENTITY_AXIOM_NAMES,
    build_identity_axiom_proofs_S3,
    build_K_hypothesis_proof,
    build_K_proof,
    build_principle_N_proof,
    identity_axiom_formulas,
    principle_k,
    principle_n,
)
from .kernel import (
    AN,
    MP,
    S1,
    S1_BOXSP,
    S1_SP,
    S3,
    S4,
    S5,
    SPSE,
    SYSTEMS,
    Ax,
    Derivation,
    Hyp,
    ProofError,
    SPInst,
    Step,
    SystemConfig,
    SystemId,
    TautAx,
    accepts,
    check_derivation,
    get_system,
    make_s5,
    sp_formula,
)
from .textformat import ProofFile, ProofFormatError, format_step, parse_proof_text, to_proof_text
