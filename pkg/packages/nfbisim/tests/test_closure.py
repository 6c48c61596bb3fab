"""
Matching modulo fresh names and closure membership. No network.
Run: pytest -q
"""

from nfbisim.calculi import get_calculus
from nfbisim.closure import MEMBER, ClosureSearch
from nfbisim.contexts import AppR, Ctx
from nfbisim.grammar import parse_term
from nfbisim.matching import ctx_hole_matches, match_modulo_fresh, value_hole_matches
from nfbisim.relation import RelPair, make_pair
from nfbisim.techniques import Technique as T
from nfbisim.terms import CalculusId, CtxApp, Var

L, SR, CC = CalculusId.LAMBDA, CalculusId.SHIFT_RESET, CalculusId.CALLCC_ABORT


def lt(text):
    return parse_term(text, L)


ETA = make_pair(L, lt("y"), lt(r"\x. y x"), fresh=["y"], label="eta")


# ----------------------------- matching ----------------------------------

def test_fresh_names_rename_consistently():
    assert match_modulo_fresh(lt("z"), lt(r"\x. z x"), ETA) == {"y": "z"}
    assert match_modulo_fresh(lt("z"), lt(r"\x. w x"), ETA) is None


def test_fresh_names_never_land_on_fixed_names():
    pr = make_pair(L, lt("f y"), lt("f y"), fresh=["y"])
    assert match_modulo_fresh(lt("f g"), lt("f g"), pr) == {"y": "g"}
    assert match_modulo_fresh(lt("f f"), lt("f f"), pr) is None


def test_renaming_is_injective():
    pr = make_pair(L, lt("f g"), lt("g f"), fresh=["f", "g"])
    assert match_modulo_fresh(lt("a b"), lt("b a"), pr) == {"f": "a", "g": "b"}
    assert match_modulo_fresh(lt("a a"), lt("a a"), pr) is None


def test_value_hole_solved_per_side():
    v = lt(r"\a. a")
    found = list(value_hole_matches(v, lt(r"\x. (\a. a) x"), ETA, "y"))
    assert [(lhs, rhs) for _, lhs, rhs in found] == [(v, v)]
    assert list(value_hole_matches(lt("f g"), lt(r"\x. (f g) x"), ETA, "y")) == []


def test_context_hole_matches_program_contexts():
    pr = RelPair(CtxApp("k", Var("y")), CtxApp("k", Var("y")), frozenset({"k"}))
    goal = parse_term("j[g y]", CC)
    found = list(ctx_hole_matches(goal, goal, pr, "k"))
    ctx = Ctx((AppR(Var("g")),), "j")
    assert [(f, g) for _, f, g in found] == [(ctx, ctx)]


# ----------------------------- closure -----------------------------------

def search(calc, base=(), fuel=100, **kw):
    return ClosureSearch(get_calculus(calc), base, fuel, **kw)


def test_refl_and_member():
    s = search(L, [ETA])
    assert s.member(lt("f g"), lt("f g"), {T.REFL}, 0).rule == "refl"
    proof = s.member(lt("z"), lt(r"\x. z x"), set(), 0)
    assert proof.rule == MEMBER and proof.pair == "eta"
    assert dict(proof.renaming) == {"y": "z"}


def test_red_relates_reducts():
    proof = search(L).member(lt(r"(\x. x) y"), lt("y"), {T.RED, T.REFL}, 1)
    assert proof.rule == "red"
    assert proof.techniques() == {T.RED, T.REFL}
    assert search(L).member(lt(r"(\x. x) y"), lt("y"), {T.REFL}, 3) is None


def test_depth_bounds_derivation_height():
    a, b = lt(r"\x. (\z. z) x"), lt(r"\x. x")
    allowed = {T.LAM, T.RED, T.REFL}
    assert search(L).member(a, b, allowed, 1) is None
    proof = search(L).member(a, b, allowed, 2)
    assert proof.rule == "lam" and proof.height() == 3


def test_evaluation_context_factoring():
    base = [make_pair(L, lt("g"), lt(r"\x. g x"), label="g")]
    a, b = lt("g f"), lt(r"(\x. g x) f")
    proof = search(L, base).member(a, b, {T.ECTX, T.REFL}, 1)
    assert proof.rule == "ectx"
    assert {p.rule for p in proof.premises} == {"refl", MEMBER}
    assert search(L, base).member(a, b, {T.REFL}, 3) is None


def test_substitutive_closure_uses_value_hole():
    v = lt(r"\a. a")
    proof = search(L, [ETA]).member(v, lt(r"\x. (\a. a) x"), {T.SUBST, T.REFL}, 1)
    assert proof.rule == "subst"
    assert proof.premises[0].rule == MEMBER and proof.premises[0].pair == "eta"


def test_context_substitution_closure():
    base = [make_pair(CC, parse_term("k[f]", CC), parse_term(r"k[(\x. x) f]", CC), fresh=["k"], label="p")]
    a, b = parse_term("j[g f]", CC), parse_term(r"j[g ((\x. x) f)]", CC)
    proof = search(CC, base).member(a, b, {T.SUBSTC, T.REFL}, 1)
    assert proof.rule == "substc"
    assert proof.premises[0].rule == MEMBER


def test_reset_delimited_pure_contexts():
    a, b = parse_term("<f (y g)>", SR), parse_term(r"<f ((\x. x) (y g))>", SR)
    proof = search(SR).member(a, b, {T.PCTXRST, T.RED, T.REFL}, 2)
    assert proof.rule == "pctxrst"
    assert search(SR).member(a, b, {T.RED, T.REFL}, 3) is None


def test_node_budget_stops_search():
    s = search(L, budget=0)
    assert s.member(lt(r"(\x. x) y"), lt("y"), {T.RED, T.REFL}, 3) is None


def test_red_relates_intermediate_reducts():
    base = [make_pair(L, lt(r"(\x. x) f"), lt("g"), label="mid")]
    a = lt(r"(\x. x) ((\y. y) f)")
    proof = search(L, base).member(a, lt("g"), {T.RED}, 1)
    assert proof.rule == "red"
    assert proof.premises[0].rule == MEMBER and proof.premises[0].pair == "mid"


def test_substitution_into_a_reflexive_pair():
    a, b = lt(r"h (\x. x)"), lt(r"h (\x. (\y. y) x)")
    proof = search(L).member(a, b, {T.SUBST, T.RED, T.REFL}, 2)
    assert proof.rule == "subst"
    refl, premise = proof.premises
    assert refl.rule == "refl" and refl.lhs == refl.rhs
    assert premise.rule == "red"
    assert search(L).member(a, b, {T.SUBST, T.RED}, 3) is None


def test_root_differences_are_not_substituted():
    assert search(L).member(lt(r"\x. x"), lt(r"\x. \y. x y"), {T.SUBST, T.RED, T.REFL}, 3) is None


def test_substitution_into_a_proved_pair():
    allowed = {T.SUBST, T.RED, T.REFL}
    a, b = lt(r"g (\x. x)"), lt(r"g (\x. (\y. y) x)")
    assert search(L).member(a, b, allowed, 1) is None
    s = search(L)
    assert s.member(lt(r"h (\x. x)"), lt(r"h (\x. (\y. y) x)"), allowed, 2) is not None
    proof = s.member(a, b, allowed, 1)
    assert proof.rule == "subst"
    assert proof.premises[0].lhs == lt(r"h (\x. x)")


def test_reset_context_needs_its_outer_premise_without_refl():
    ctx = make_pair(SR, parse_term("<f z>", SR), parse_term("<h z>", SR), fresh=["z"], label="ctx")
    arg = make_pair(SR, parse_term("y g", SR), parse_term("y g", SR), label="arg")
    a, b = parse_term("<f (y g)>", SR), parse_term("<h (y g)>", SR)
    assert search(SR, [ctx, arg]).member(a, b, {T.PCTXRST}, 2) is None
    ident = make_pair(SR, Var("x"), Var("x"), fresh=["x"], label="id")
    proof = search(SR, [ctx, arg, ident]).member(a, b, {T.PCTXRST}, 1)
    assert proof.rule == "pctxrst"
    assert [p.pair for p in proof.premises] == ["ctx", "arg", "id"]
    proof = search(SR, [ctx, arg]).member(a, b, {T.PCTXRST, T.REFL}, 1)
    assert [p.pair for p in proof.premises] == ["ctx", "arg"]
