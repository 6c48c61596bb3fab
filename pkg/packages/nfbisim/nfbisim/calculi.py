"""Registry tying each CalculusId to its reduction semantics and tests."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Tuple, Union

from . import calc_callcc, calc_lambda, calc_shift_reset
from .semantics import Decomposition, EvalResult, NormalForm, ObligationResult, Step, run
from .terms import Abort, CalculusId, CtxApp, Term, check_calculus, free_names, fresh_ctx_var


@dataclass(frozen=True)
class Calculus:
    id: CalculusId
    advance: Callable[[Term], Union[Step, NormalForm]]
    decompose: Callable[[Term], Decomposition]
    obligations: Callable[[NormalForm, NormalForm, Iterable[str]], ObligationResult]
    programs: bool = False

    def step(self, t: Term) -> Optional[Term]:
        s = self.advance(t)
        return s.term if isinstance(s, Step) else None

    def evaluate(self, t: Term, fuel: int, record: bool = False) -> EvalResult:
        return run(self.advance, t, fuel, record)

    def lift_pair(self, lhs: Term, rhs: Term) -> Tuple[Term, Term]:
        """In the call/cc calculus a bare term is tested inside one fresh
        context variable shared by both sides. A side that already is a
        program, rooted in a context application or an abort, is kept."""
        if not self.programs:
            return lhs, rhs
        k = fresh_ctx_var(free_names(lhs, rhs))
        lifted = tuple(t if isinstance(t, (CtxApp, Abort)) else CtxApp(k, t) for t in (lhs, rhs))
        for t in lifted:
            check_calculus(t, self.id)
        return lifted


CALCULI = {
    CalculusId.LAMBDA: Calculus(
        CalculusId.LAMBDA, calc_lambda.advance_l, calc_lambda.decompose_l, calc_lambda.obligations_l
    ),
    CalculusId.SHIFT_RESET: Calculus(
        CalculusId.SHIFT_RESET, calc_shift_reset.advance_sr, calc_shift_reset.decompose_sr, calc_shift_reset.obligations_sr
    ),
    CalculusId.CALLCC_ABORT: Calculus(
        CalculusId.CALLCC_ABORT, calc_callcc.advance_cc, calc_callcc.decompose_cc, calc_callcc.obligations_cc, programs=True
    ),
}


def get_calculus(calc: Union[CalculusId, str]) -> Calculus:
    return CALCULI[CalculusId(calc)]
