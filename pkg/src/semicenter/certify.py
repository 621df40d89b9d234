"""Certificates for polynomiality of the Poisson center and the rationality verdict engine."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exactpoly import Poly, divides, exact_divide, parse_poly, pfaffian, rat_rank
from .exactpoly.poly import NotDivisible, UsageError
from .invsearch import (
    DEFAULT_MONOMIAL_CAP,
    GradedInvariantTable,
    build_table,
    generator_candidates,
    jacobian_rank,
    truncation_estimate,
)
from .liecore import (
    LieAlgebra,
    LinFunc,
    Subspace,
    ad_basis,
    center,
    derived_algebra,
    embedding_images,
    is_commutative,
    is_ideal,
    is_solvable,
    is_subalgebra,
    poisson_bracket,
    restrict,
    subalgebra_bracket_span,
    trace_form,
)
from .structura import check_cp, fundamental_semiinvariant, index, magic_number, sample_frobenius_semiradical

POLYNOMIAL_CENTER = "PolynomialCenter"
FROBENIUS_DECOMPOSITION = "FrobeniusDecomposition"
OBSTRUCTION = "Obstruction"
DEGREE_BOUND = "DegreeBound"

RATIONAL = "RationalCertified"
UNKNOWN = "Unknown"

# rule id -> (short name, citation)
RULES = {
    "R1": ("solvable", "Solvable L: R(L)^L is rational over k (Dixmier)."),
    "R2": ("frobenius", "Frobenius Lie algebras: R(L)^L = k."),
    "R3": (
        "coregular-no-proper-semi-invariants",
        "Coregular Lie algebras without proper semi-invariants: R(L)^L is the quotient field of the "
        "polynomial algebra Y(L), since invariant rational functions are quotients of two "
        "semi-invariants of the same weight.",
    ),
    "R4": (
        "algebraic-polynomial-semi-center",
        "Algebraic Lie algebras whose Poisson semi-center Sy(L) = Y(L_Lambda) is polynomial have "
        "R(L)^L rational over k.",
    ),
    "R5": (
        "sl2-semidirect-cp-ideal",
        "L = sl(2) + W semidirect with i(L) = dim W - 3: W is a CP-ideal, R(L)^L = R(W)^SL(2), "
        "rational by Katsylo.",
    ),
    "R6": (
        "square-integrable",
        "Square integrable Lie algebras (i(L) = dim Z(L), so F(L) = Z(L) and R(L)^L = R(Z(L))).",
    ),
    "R7": (
        "direct-product",
        "Direct product L = L1 + L2: R(L)^L is rational over k once R(L1)^L1 and R(L2)^L2 are.",
    ),
}

CITE_FREE_GENERATION_BOUND = "Sy(g) freely generated by homogeneous f_i implies sum deg f_i <= c(g)."
CITE_SUFFICIENCY = (
    "i(g) algebraically independent homogeneous invariants with sum deg f_i <= c(g) - deg p_g "
    "freely generate Y(g), with equality."
)
CITE_COREGULARITY_BOUND = (
    "No proper semi-invariants and Y(g) free: 3 i(g) + 2 deg p_g <= dim g + 2 dim Z(g), with "
    "equality iff every generator has degree <= 2."
)
CITE_FROBENIUS = (
    "Frobenius g: the irreducible factors v_i of p_g = Pf([x_i, x_j]) are the irreducible "
    "semi-invariants; weights independent; sum m_i lambda_i = tau; sum m_i deg v_i = dim g / 2."
)
CITE_TRUNCATION_PFAFFIAN = "g algebraic: p_{g_Lambda} = prod v_i^(m_i - 1) and p_{g_Lambda} divides p_g."


class CertificationFailure(Exception):
    """A hypothesis of a certification rule failed; ``code`` names which one."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"{code}: {message}")


@dataclass(frozen=True)
class Certificate:
    kind: str
    facts: tuple[tuple[str, object], ...]
    conclusion: str
    payload: dict
    citations: tuple[str, ...]

    def fact(self, name: str):
        for k, v in self.facts:
            if k == name:
                return v
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "facts": {k: _jsonable(v) for k, v in self.facts},
            "conclusion": self.conclusion,
            "payload": _jsonable(self.payload),
            "citations": list(self.citations),
        }


@dataclass(frozen=True)
class Verdict:
    status: str
    rule: str | None
    citation: str | None
    chain: tuple[str, ...]
    caveats: tuple[str, ...] = ()
    attempted: tuple[tuple[str, str], ...] = ()
    satisfied: tuple[str, ...] = ()
    payload: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "rule": self.rule,
            "rule_name": RULES[self.rule][0] if self.rule else None,
            "citation": self.citation,
            "chain": list(self.chain),
            "caveats": list(self.caveats),
            "attempted": {r: why for r, why in self.attempted},
            "satisfied": list(self.satisfied),
            "payload": _jsonable(self.payload),
        }


def _jsonable(v):
    from .exactpoly import Rat, rat_str

    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Rat):
        return rat_str(v)
    if isinstance(v, Poly):
        return v.to_text()
    if isinstance(v, LinFunc):
        return v.to_json()
    if isinstance(v, Subspace):
        return v.to_json()
    return v


def _deg(p: Poly) -> int:
    d = p.degree()
    if not isinstance(d, int):
        raise UsageError("zero polynomial has no degree")
    return d


# degree bounds


def check_degree_bound(L: LieAlgebra, gens: Sequence[Poly], seed: int = 0) -> Certificate:
    """Sum of degrees of homogeneous ``gens`` must not exceed c(g)."""
    for f in gens:
        if not f or not f.is_homogeneous():
            raise UsageError(f"generator {f} is not a nonzero homogeneous polynomial")
    total = sum(_deg(f) for f in gens)
    c = magic_number(L, seed)
    if total > c:
        raise CertificationFailure(
            "degree_bound", f"degree sum {total} exceeds c(g) = {c}; these cannot freely generate Sy(g)"
        )
    return Certificate(
        DEGREE_BOUND,
        (("degree_sum", total), ("magic_number", c)),
        f"degree sum {total} <= c(g) = {c}",
        {"degrees": [_deg(f) for f in gens]},
        (CITE_FREE_GENERATION_BOUND,),
    )


def no_proper_semiinvariants(L: LieAlgebra, table: GradedInvariantTable | None) -> tuple[bool, str | None]:
    """(holds, caveat): unconditional when [g,g] = g, otherwise only up to the table's degree."""
    if derived_algebra(L).is_whole():
        return True, None
    if table is None:
        return False, None
    if table.has_proper_semiinvariants():
        return False, None
    if table.unresolved():
        return False, None
    return True, f"semi-invariant absence verified only up to degree {table.max_degree}"


def certify_polynomial_center(
    L: LieAlgebra,
    gens: Sequence[Poly],
    seed: int = 0,
    table: GradedInvariantTable | None = None,
) -> Certificate:
    """Certify Y(g) = k[gens] by the degree-sum sufficiency criterion."""
    gens = list(gens)
    i = index(L, seed)
    if len(gens) != i:
        raise CertificationFailure("count", f"{len(gens)} generators but i(g) = {i} (count != i(g))")
    for f in gens:
        if f.nvars != L.dim:
            raise UsageError("generator is not in the algebra's variables")
        if not f or not f.is_homogeneous():
            raise CertificationFailure("not_homogeneous", f"{f.to_text(L.basis)} is not homogeneous")
        for k in range(L.dim):
            if ad_basis(L, k, f):
                raise CertificationFailure(
                    "not_invariant", f"ad {L.basis[k]} does not annihilate {f.to_text(L.basis)}"
                )
    jr = jacobian_rank(gens, seed) if gens else 0
    if jr != len(gens):
        raise CertificationFailure("dependent", f"Jacobian rank {jr} < {len(gens)}")
    c = magic_number(L, seed)
    p, _ = fundamental_semiinvariant(L, seed)
    degp = _deg(p)
    total = sum(_deg(f) for f in gens)
    if total > c - degp:
        raise CertificationFailure("degree_bound", f"degree sum {total} > c(g) - deg p_g = {c - degp}")
    if total != c - degp:
        raise AssertionError("degree sum strictly below c - deg p contradicts the sufficiency theorem")
    names = [f.to_text(L.basis) for f in gens]
    facts = [
        ("index", i),
        ("count", len(gens)),
        ("homogeneous_invariants", True),
        ("jacobian_rank", jr),
        ("degree_sum", total),
        ("magic_number", c),
        ("deg_p", degp),
    ]
    citations = [CITE_SUFFICIENCY]
    conclusion = f"Y(g) = k[{', '.join(names)}]"
    npsi, caveat = no_proper_semiinvariants(L, table)
    payload = {"generators": names, "degrees": [_deg(f) for f in gens]}
    if npsi:
        facts.append(("no_proper_semiinvariants", caveat or "unconditional ([g,g] = g)"))
        conclusion += f"; R(g)^g = k({', '.join(names)})"
        citations.append(RULES["R3"][1])
        payload["rational_invariants"] = names
    return Certificate(POLYNOMIAL_CENTER, tuple(facts), conclusion, payload, tuple(citations))


def coregularity_obstruction(
    L: LieAlgebra,
    table: GradedInvariantTable,
    seed: int = 0,
) -> Certificate | None:
    """Certificate that Y(g) is not polynomial, or None when inconclusive."""
    if table.max_degree < 2:
        raise UsageError("need invariant table up to degree 2 at least")
    npsi, caveat = no_proper_semiinvariants(L, table)
    if not npsi:
        return None
    i = index(L, seed)
    p, _ = fundamental_semiinvariant(L, seed)
    zdim = center(L).dim
    lhs = 3 * i + 2 * _deg(p)
    rhs = L.dim + 2 * zdim
    if lhs != rhs:
        return None
    low = table.invariants.get(1, []) + table.invariants.get(2, [])
    r = jacobian_rank(low, seed) if low else 0
    if r >= i:
        return None
    dims = table.invariant_dims()
    facts = [
        ("index", i),
        ("deg_p", _deg(p)),
        ("dim_center", zdim),
        ("3i+2deg_p", lhs),
        ("dim+2dimZ", rhs),
        ("independent_invariants_deg_le_2", r),
        ("invariant_dims", dims),
        ("no_proper_semiinvariants", caveat or "unconditional ([g,g] = g)"),
    ]
    return Certificate(
        OBSTRUCTION,
        tuple(facts),
        "Y(g) is not a polynomial algebra",
        {"min_invariant_degree": table.min_invariant_degree()},
        (CITE_COREGULARITY_BOUND,),
    )


# Frobenius decomposition


def frobenius_analysis(
    L: LieAlgebra,
    D: int,
    seed: int = 0,
    table: GradedInvariantTable | None = None,
    cap: int = DEFAULT_MONOMIAL_CAP,
) -> Certificate:
    """Factor p_g by trial division against semi-invariants found up to degree D."""
    if index(L, seed) != 0:
        raise UsageError(f"{L.name} is not Frobenius (index {index(L, seed)})")
    n = L.dim
    if table is None or table.max_degree < D:
        table = build_table(L, D, cap)
    p = pfaffian(L.structure_matrix())
    residual = p
    factors: list[tuple[Poly, int, LinFunc]] = []
    for d in range(1, D + 1):
        for lam, basis in table.semiinvariants[d].slices:
            for v in basis:
                if residual.is_constant():
                    break
                # heuristic irreducibility: no accepted smaller factor divides v
                if any(divides(f, v) for f, _, _ in factors):
                    continue
                m = 0
                while True:
                    try:
                        residual = exact_divide(residual, v)
                    except NotDivisible:
                        break
                    m += 1
                if m:
                    factors.append((v, m, lam))
    complete = residual.is_constant()
    scalar = residual.constant_value() if complete else None
    tau = trace_form(L)
    facts: list[tuple[str, object]] = [("p", p.to_text(L.basis)), ("complete", complete)]
    payload: dict = {
        "pfaffian": p.to_text(L.basis),
        "factors": [
            {"v": v.to_text(L.basis), "m": m, "weight": lam.to_json(), "degree": _deg(v)} for v, m, lam in factors
        ],
        "residual": residual.to_text(L.basis),
        "complete": complete,
        "tau": tau.to_json(),
    }
    if not complete:
        return Certificate(
            FROBENIUS_DECOMPOSITION,
            tuple(facts),
            f"partial factorization of p_g up to degree {D}; residual factor {residual.to_text(L.basis)}",
            payload,
            (CITE_FROBENIUS,),
        )
    r = len(factors)
    wrank = rat_rank([list(lam.coords) for _, _, lam in factors]) if factors else 0
    if wrank != r:
        raise CertificationFailure("weights_dependent", f"weights have rank {wrank} < {r}")
    msum = LinFunc.zero(n)
    for _, m, lam in factors:
        msum = msum + lam.scale(m)
    if msum != tau:
        raise CertificationFailure("weight_sum", "sum m_i lambda_i != tau")
    degsum = sum(m * _deg(v) for v, m, _ in factors)
    if degsum != n // 2 or _deg(p) != n // 2:
        raise CertificationFailure("degree_sum", f"sum m_i deg v_i = {degsum} != dim/2 = {n // 2}")
    trunc = truncation_estimate(L, D, cap)
    if r != n - trunc.dim:
        raise CertificationFailure("truncation_codim", f"r = {r} but dim g - dim g_Lambda = {n - trunc.dim}")
    facts += [
        ("r", r),
        ("weights_rank", wrank),
        ("weighted_sum_equals_tau", True),
        ("weighted_degree_sum", degsum),
        ("half_dim", n // 2),
        ("dim_truncation_estimate", trunc.dim),
        ("pfaffian_scalar", scalar),
    ]
    citations = [CITE_FROBENIUS]
    payload["truncation"] = trunc.to_json()
    if L.flags.get("algebraic") == "yes":
        M = restrict(L, trunc, name=f"{L.name}_Lambda")
        pM, _ = fundamental_semiinvariant(M, seed)
        pM_in_g = pM.substitute(embedding_images(L, trunc)).normalized() if M.dim else Poly.const(n, 1)
        expected = Poly.const(n, 1)
        for v, m, _ in factors:
            expected = expected * v ** (m - 1)
        if pM_in_g != expected.normalized():
            raise CertificationFailure("truncation_pfaffian", f"p_(g_Lambda) = {pM_in_g} != {expected}")
        if not divides(pM_in_g, p):
            raise CertificationFailure("truncation_divisibility", "p_(g_Lambda) does not divide p_g")
        facts += [("p_truncation", pM_in_g.to_text(L.basis)), ("p_truncation_divides_p", True)]
        payload["p_truncation"] = pM_in_g.to_text(L.basis)
        citations.append(CITE_TRUNCATION_PFAFFIAN)
    return Certificate(
        FROBENIUS_DECOMPOSITION,
        tuple(facts),
        "Sy(g) = k[" + ", ".join(v.to_text(L.basis) for v, _, _ in factors) + "]",
        payload,
        tuple(citations),
    )


# verdict engine


def _split_check(L: LieAlgebra, seed: int) -> tuple[bool, str, list[str]]:
    if L.split is None:
        return False, "no split marker", []
    levi, module = L.split["levi"], L.split["module"]
    n = L.dim
    if sorted(levi + module) != list(range(n)):
        return False, "split marker does not partition the basis", []
    S = Subspace.coordinate(n, levi)
    W = Subspace.coordinate(n, module)
    if len(levi) != 3 or not is_subalgebra(L, S) or subalgebra_bracket_span(L, S, S) != S:
        return False, "levi part is not a 3-dim simple subalgebra", []
    if not is_ideal(L, W) or not is_commutative(L, W):
        return False, "module part is not an abelian ideal", []
    if W.dim < 3:
        return False, "dim W < 3", []
    i = index(L, seed)
    if i != W.dim - 3:
        return False, f"i(L) = {i} != dim W - 3 = {W.dim - 3}", []
    cp = check_cp(L, W, seed)
    if not cp.is_cpi:
        return False, "W is not a CP-ideal: " + "; ".join(cp.reasons), []
    chain = [
        "levi part spans a 3-dim subalgebra S with [S,S] = S (sl(2))",
        f"module part W is an abelian ideal, dim W = {W.dim}",
        f"i(L) = {i} = dim W - 3",
        "W is a CP-ideal (checked: commutative, ideal, dim W = c(L))",
    ]
    return True, "ok", chain


def rationality_verdict(
    L: LieAlgebra,
    table: GradedInvariantTable,
    certs: Sequence[Certificate] = (),
    seed: int = 0,
    cap: int = DEFAULT_MONOMIAL_CAP,
    _depth: int = 0,
) -> Verdict:
    """Apply the rationality rules R1..R7 in order; the first satisfied rule is primary."""
    D = table.max_degree
    attempted: list[tuple[str, str]] = []
    hits: list[tuple[str, list[str], list[str], dict]] = []
    index_caveat = f"index computed by randomized generic rank (seed {seed})"

    # R1
    if is_solvable(L):
        hits.append(("R1", ["derived series terminates at 0"], [], {}))
    else:
        attempted.append(("R1", "not solvable"))

    # R2
    i = index(L, seed)
    if i == 0:
        hits.append(("R2", ["i(L) = 0"], [index_caveat], {}))
    else:
        attempted.append(("R2", f"i(L) = {i} != 0"))

    # R3
    npsi, caveat = no_proper_semiinvariants(L, table)
    poly_cert = next((c for c in certs if c.kind == POLYNOMIAL_CENTER), None)
    if not npsi:
        attempted.append(("R3", f"proper semi-invariants found (or unresolved) up to degree {D}"))
    else:
        if poly_cert is None:
            try:
                gens = generator_candidates(L, D, seed, cap, table)
                poly_cert = certify_polynomial_center(L, gens, seed, table)
            except CertificationFailure as exc:
                attempted.append(("R3", f"Y(L) not certified polynomial up to degree {D}: {exc}"))
        if poly_cert is not None:
            chain = [
                "no proper semi-invariants: " + (caveat or "[L,L] = L"),
                poly_cert.conclusion,
            ]
            cav = [index_caveat] + ([caveat] if caveat else [])
            hits.append(("R3", chain, cav, {"generators": poly_cert.payload["generators"]}))

    # R4
    if L.flags.get("algebraic") != "yes":
        attempted.append(("R4", f"algebraic flag is {L.flags.get('algebraic')!r}"))
    else:
        trunc = truncation_estimate(L, D, cap)
        M = L if trunc.is_whole() else restrict(L, trunc, name=f"{L.name}_Lambda")
        mtable = table if M is L else build_table(M, D, cap)
        try:
            mgens = generator_candidates(M, D, seed, cap, mtable)
            mcert = certify_polynomial_center(M, mgens, seed, mtable)
            hits.append(
                (
                    "R4",
                    [
                        "flags.algebraic = yes",
                        f"g_Lambda estimate has dim {trunc.dim}",
                        "Y(g_Lambda) certified: " + mcert.conclusion,
                        "Sy(L) = Y(L_Lambda) for algebraic L",
                    ],
                    [index_caveat, f"g_Lambda estimated from weights up to degree {D} (upper bound)"],
                    {"truncation": trunc.to_json(), "generators": mcert.payload["generators"]},
                )
            )
        except CertificationFailure as exc:
            attempted.append(("R4", f"Y(L_Lambda) not certified polynomial up to degree {D}: {exc}"))

    # R5
    ok, why, chain = _split_check(L, seed)
    if ok:
        hits.append(("R5", chain, [index_caveat], {}))
    else:
        attempted.append(("R5", why))

    # R6
    zdim = center(L).dim
    if i == zdim:
        fs = sample_frobenius_semiradical(L, seed)
        hits.append(
            (
                "R6",
                [f"i(L) = {i} = dim Z(L)", f"sampled F(L) has dim {fs.subspace.dim} ({fs.stop_reason})"],
                [index_caveat, "F(L) = Z(L) rests on the generic-rank index; sampled F(L) is generically exact"],
                {},
            )
        )
    else:
        attempted.append(("R6", f"i(L) = {i} != dim Z(L) = {zdim}"))

    # R7
    if L.summands is None or len(L.summands) < 2:
        attempted.append(("R7", "no direct-product decomposition supplied"))
    elif _depth > 4:
        attempted.append(("R7", "decomposition nesting too deep"))
    else:
        parts = []
        good = True
        for s in L.summands:
            S = Subspace.coordinate(L.dim, s)
            if not is_ideal(L, S):
                attempted.append(("R7", f"summand {[k + 1 for k in s]} is not an ideal"))
                good = False
                break
            parts.append(L.sub_algebra(s, name=f"{L.name}[{','.join(str(k + 1) for k in s)}]"))
        if good:
            sub_verdicts = [
                rationality_verdict(P, build_table(P, D, cap), (), seed, cap, _depth + 1) for P in parts
            ]
            if all(v.status == RATIONAL for v in sub_verdicts):
                chain = [f"{P.name}: {v.rule} ({RULES[v.rule][0]})" for P, v in zip(parts, sub_verdicts)]
                cav = sorted({c for v in sub_verdicts for c in v.caveats})
                hits.append(("R7", chain, cav, {"summands": [v.to_json() for v in sub_verdicts]}))
            else:
                attempted.append(("R7", "some summand is not certified"))

    if not hits:
        return Verdict(UNKNOWN, None, None, (), (), tuple(attempted), ())
    rule, chain, caveats, payload = hits[0]
    return Verdict(
        RATIONAL,
        rule,
        RULES[rule][1],
        tuple(chain),
        tuple(caveats),
        tuple(attempted),
        tuple(h[0] for h in hits),
        payload,
    )


# independent re-verification


def verify_certificate(L: LieAlgebra, cert: Certificate, seed: int = 0) -> bool:
    """Re-check a certificate from its payload alone, by a separate route.

    Invariance is re-checked with the Poisson bracket, independence with the
    symbolic Jacobian rank.
    """
    if cert.kind == POLYNOMIAL_CENTER:
        gens = [parse_poly(t, L.basis) for t in cert.payload["generators"]]
        xs = [Poly.var(L.dim, k) for k in range(L.dim)]
        if any(poisson_bracket(L, x, f) for x in xs for f in gens):
            return False
        if jacobian_rank(gens, seed, "symbolic") != len(gens):
            return False
        total = sum(_deg(f) for f in gens)
        return total == cert.fact("magic_number") - cert.fact("deg_p") and len(gens) == cert.fact("index")
    if cert.kind == FROBENIUS_DECOMPOSITION:
        p = parse_poly(cert.payload["pfaffian"], L.basis)
        prod = Poly.const(L.dim, 1)
        for f in cert.payload["factors"]:
            prod = prod * parse_poly(f["v"], L.basis) ** f["m"]
        prod = prod * parse_poly(cert.payload["residual"], L.basis)
        if prod != p:
            return False
        if not cert.payload["complete"]:
            return True
        half = L.dim // 2
        return sum(f["m"] * f["degree"] for f in cert.payload["factors"]) == half
    if cert.kind == DEGREE_BOUND:
        return cert.fact("degree_sum") <= cert.fact("magic_number")
    if cert.kind == OBSTRUCTION:
        return cert.fact("3i+2deg_p") == cert.fact("dim+2dimZ") and cert.fact(
            "independent_invariants_deg_le_2"
        ) < cert.fact("index")
    return False
