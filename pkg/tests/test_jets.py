import pytest
import sympy

from motivic_kit.errors import OrderMismatch, SchemaError
from motivic_kit.exactalg import MPoly, TruncSeries, parse_poly
from motivic_kit.jets import AffineSystem, generic_jets, jet_equations, jet_var, truncate_compose

from conftest import DATA, to_sympy

CUSP = AffineSystem.parse("x2^2 - x1^3")
NODE = AffineSystem.parse("x1*x2")
PARABOLA = AffineSystem.parse("x2 - x1^2")
SYSTEMS = {
    "cusp": CUSP,
    "node": NODE,
    "parabola": PARABOLA,
    "twisted": AffineSystem.parse(["x2 - x1^2", "x3 - x1*x2"]),
}


def rename(text, a="a1", b="a2"):
    # the displayed systems use a_k for x and b_k for y
    return parse_poly(text.replace("a", "A").replace("b", "B").replace("A", a + "_").replace("B", b + "_"))


def test_cusp_level_one():
    js = jet_equations(CUSP, 1)
    assert js.groups[0] == (rename("b0^2 - a0^3"),)
    assert js.groups[1] == (rename("2*b0*b1 - 3*a0^2*a1"),)


def test_cusp_level_two():
    js = jet_equations(CUSP, 2)
    assert js.groups[:2] == jet_equations(CUSP, 1).groups
    assert js.groups[2] == (rename("b1^2 + 2*b0*b2 - 3*a0*a1^2 - 3*a0^2*a2"),)


@pytest.mark.parametrize("n", range(5))
def test_coordinate_function(n):
    js = jet_equations(AffineSystem.parse("x1"), n)
    assert js.equations == [MPoly.var(jet_var(1, k)) for k in range(n + 1)]


def test_jet_system_shape():
    js = jet_equations(SYSTEMS["twisted"], 3)
    assert js.num_vars == 3 * 4
    assert js.variables[:4] == ["a1_0", "a1_1", "a1_2", "a1_3"]
    assert js.level_variables(2) == ["a1_2", "a2_2", "a3_2"]
    text = js.to_text()
    assert text.splitlines()[0] == "# t^0"
    assert text.count("# t^") == 4


@pytest.mark.parametrize("name", SYSTEMS)
@pytest.mark.parametrize("n", range(5))
def test_triangular_and_equation_count(name, n):
    sys_ = SYSTEMS[name]
    js = jet_equations(sys_, n)
    assert len(js.equations) == (n + 1) * len(sys_.polys)
    for k, group in enumerate(js.groups):
        allowed = {jet_var(j, i) for j in range(1, sys_.num_vars + 1) for i in range(k + 1)}
        for eq in group:
            assert set(eq.vars) <= allowed


@pytest.mark.parametrize("name", SYSTEMS)
@pytest.mark.parametrize("n", range(1, 5))
def test_truncation_coherence(name, n):
    sys_ = SYSTEMS[name]
    assert jet_equations(sys_, n).groups[:n] == jet_equations(sys_, n - 1).groups


@pytest.mark.parametrize("name", SYSTEMS)
def test_sympy_composition(name):
    sys_ = SYSTEMS[name]
    n = 3
    t = sympy.Symbol("t")
    subs = {sympy.Symbol(f"x{j}"): sum(sympy.Symbol(jet_var(j, k)) * t**k for k in range(n + 1))
            for j in range(1, sys_.num_vars + 1)}
    js = jet_equations(sys_, n)
    for i, f in enumerate(sys_.polys):
        expanded = sympy.Poly(sympy.expand(to_sympy(f).subs(subs, simultaneous=True)), t)
        for k in range(n + 1):
            want = expanded.coeff_monomial(t**k)
            assert sympy.expand(to_sympy(js.groups[k][i]) - want) == 0


@pytest.mark.parametrize("name", ["parabola", "twisted", "cusp"])
def test_linear_part_in_top_coefficients(name):
    # for k >= 1 the t^k equation is grad f(a_0) . a_k plus terms of lower level
    sys_ = SYSTEMS[name]
    m = sys_.num_vars
    js = jet_equations(sys_, 3)
    base = {sympy.Symbol(f"x{j}"): sympy.Symbol(jet_var(j, 0)) for j in range(1, m + 1)}
    for i, f in enumerate(sys_.polys):
        F = to_sympy(f)
        for k in range(1, 4):
            eq = to_sympy(js.groups[k][i])
            top = [sympy.Symbol(jet_var(j, k)) for j in range(1, m + 1)]
            for j, a in enumerate(top, 1):
                grad = sympy.diff(F, sympy.Symbol(f"x{j}")).subs(base, simultaneous=True)
                assert sympy.expand(sympy.diff(eq, a) - grad) == 0
            rest = sympy.expand(eq - sum(sympy.diff(eq, a) * a for a in top))
            assert not rest.free_symbols & set(top)


def test_truncate_compose_matches_jets():
    p = parse_poly("y^2 - x^3")
    jets = generic_jets(2, 2)
    series = {"x": TruncSeries(jets["x1"]), "y": TruncSeries(jets["x2"])}
    out = truncate_compose(p, series, 2)
    assert out.var == "t"
    assert tuple(out.coeffs) == tuple(g[0] for g in jet_equations(CUSP, 2).groups)


def test_truncate_compose_sequence_and_numbers():
    p = parse_poly("x*y")
    out = truncate_compose(p, [[1, 1, 0], [0, 1, 2]], 2)
    assert [c.constant_value() for c in out.coeffs] == [0, 1, 3]


def test_truncate_compose_order_mismatch():
    p = parse_poly("x*y")
    with pytest.raises(OrderMismatch):
        truncate_compose(p, [[1, 1]], 1)
    with pytest.raises(OrderMismatch):
        truncate_compose(p, [[1, 1], [1]], 1)
    with pytest.raises(OrderMismatch):
        truncate_compose(p, {"x": [1, 1]}, 1)


def test_affine_system_parsing():
    text = "# cusp\nx2^2 - x1^3   # comment\n\n"
    sys_ = AffineSystem.parse(text)
    assert sys_.num_vars == 2 and len(sys_.polys) == 1
    assert AffineSystem.parse("x1", num_vars=3).num_vars == 3
    assert AffineSystem.from_file(DATA / "cusp.poly").polys == sys_.polys
    with pytest.raises(SchemaError):
        AffineSystem.parse("x1/2")
    with pytest.raises(SchemaError):
        AffineSystem.parse("y - x1")
    with pytest.raises(SchemaError):
        AffineSystem.parse("x1 - x1")
    with pytest.raises(ValueError):
        jet_equations(CUSP, -1)
