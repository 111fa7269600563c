"""Random valid chain data for property tests.

Generated data follow the energy-additive model: an entry from g to h
carries the single exponent r_h - r_g (positive), the coefficient-field
maps carry -r_g (on negative lifts) and r_h (on positive lifts).  With a
zero differential the square-zero identities then reduce to the
vanishing of the d2/d1 cross term, arranged by keeping one of the two
coefficient maps zero per datum.
"""

from fractions import Fraction
from random import Random

from floergamma.cobordism import CobordismDatum
from floergamma.floer_datum import FloerDatum, Generator, LambdaMatrix, validate
from floergamma.novikov import NovikovElement

DENOMINATORS = (2, 3, 4, 5, 6, 8, 12)


def random_lift(rng: Random) -> Fraction:
    den = rng.choice(DENOMINATORS)
    num = rng.randint(-3 * den, 3 * den)
    return Fraction(num, den)


def random_datum(rng: Random, max_gens: int = 7, family: str | None = None,
                 coeffs=(-2, -1, 1, 2), name: str = "random") -> FloerDatum:
    """Ladder blocks plus spectators, modelled on the orientation pair of
    the Poincare-sphere data.

    Each block is a U-ladder of even length anchored at a d1 source (or a
    d2 target in the mirrored family); the even length keeps the largest
    feasible degree even, as it is for data of manifold origin.
    """
    if family is None:
        family = rng.choice(["d1", "d2"])
    gens: list[Generator] = []
    u = LambdaMatrix()
    d1: dict[str, NovikovElement] = {}
    d2: dict[str, NovikovElement] = {}
    count = 0

    def fresh() -> str:
        nonlocal count
        count += 1
        return f"g{count - 1}"

    n_blocks = rng.randint(1, 2)
    for _ in range(n_blocks):
        length = rng.choice((2, 2, 4))
        if family == "d1":
            # anchor grading 1, negative lift; ladder climbs by grading +4
            anchor_lift = Fraction(-rng.randint(1, 10), rng.choice((2, 3, 4, 6)))
            lifts = [anchor_lift]
            for _ in range(length - 1):
                lifts.append(lifts[-1] - abs(random_lift(rng)) - Fraction(1, 12))
            names = [fresh() for _ in range(length)]
            for j, (nm, lf) in enumerate(zip(names, lifts)):
                gens.append(Generator(nm, (1 + 4 * j) % 8, lf))
            d1[names[0]] = NovikovElement.term(rng.choice(coeffs), -lifts[0])
            for j in range(length - 1):
                u.set(names[j + 1], names[j],
                      NovikovElement.term(rng.choice(coeffs),
                                          lifts[j] - lifts[j + 1]))
        else:
            # anchor grading 4, positive lift; ladder descends by grading -4
            anchor_lift = Fraction(rng.randint(1, 10), rng.choice((2, 3, 4, 6)))
            lifts = [anchor_lift]
            for _ in range(length - 1):
                lifts.append(lifts[-1] + abs(random_lift(rng)) + Fraction(1, 12))
            names = [fresh() for _ in range(length)]
            for j, (nm, lf) in enumerate(zip(names, lifts)):
                gens.append(Generator(nm, (4 - 4 * j) % 8, lf))
            d2[names[0]] = NovikovElement.term(rng.choice(coeffs), lifts[0])
            for j in range(length - 1):
                u.set(names[j], names[j + 1],
                      NovikovElement.term(rng.choice(coeffs),
                                          lifts[j + 1] - lifts[j]))

    spectators = []
    while count < max_gens and rng.random() < 0.6:
        nm = fresh()
        spectators.append(nm)
        gens.append(Generator(nm, rng.randrange(8), random_lift(rng)))
    by_name = {g.name: g for g in gens}
    for a in spectators:
        for b in spectators:
            if a != b and (by_name[a].grading - 4) % 8 == by_name[b].grading \
                    and by_name[b].energy_lift > by_name[a].energy_lift \
                    and rng.random() < 0.5:
                u.set(a, b, NovikovElement.term(
                    rng.choice(coeffs),
                    by_name[b].energy_lift - by_name[a].energy_lift))

    datum = FloerDatum(name, gens, LambdaMatrix(), u, d1, d2)
    rep = validate(datum)
    assert rep.ok, rep.failures
    return datum


def random_small_datum(rng: Random, name: str = "small") -> FloerDatum:
    """At most 4 generators, single-term unit coefficients; grid-searchable."""
    n = rng.randint(2, 4)
    # bias gradings toward the classes the invariant actually reads
    gradings = [rng.choice([1, 5, 1, 5, 4, 0]) for _ in range(n)]
    lifts = [Fraction(rng.randint(-12, 12), rng.choice((2, 3, 4, 6))) for _ in range(n)]
    gens = [Generator(f"g{i}", gradings[i], lifts[i]) for i in range(n)]
    u = LambdaMatrix()
    for i in range(n):
        for j in range(n):
            if i != j and (gradings[i] - 4) % 8 == gradings[j] \
                    and lifts[j] > lifts[i] and rng.random() < 0.7:
                u.set(f"g{i}", f"g{j}",
                      NovikovElement.term(rng.choice((-1, 1)), lifts[j] - lifts[i]))
    d1 = {}
    for i in range(n):
        if gradings[i] == 1 and lifts[i] < 0 and rng.random() < 0.8:
            d1[f"g{i}"] = NovikovElement.term(rng.choice((-1, 1)), -lifts[i])
    datum = FloerDatum(name, gens, LambdaMatrix(), u, d1, {})
    assert validate(datum).ok
    return datum


def zero_map_datum(rng: Random, max_gens: int = 4, name: str = "blank") -> FloerDatum:
    n = rng.randint(1, max_gens)
    gens = [Generator(f"z{i}", rng.randrange(8), random_lift(rng)) for i in range(n)]
    return FloerDatum(name, gens, LambdaMatrix(), LambdaMatrix(), {}, {})


def random_trivial_cobordism(rng: Random, datum: FloerDatum) -> CobordismDatum:
    """Arbitrary maps over a datum with all structure maps zero."""
    phi = LambdaMatrix()
    mu = LambdaMatrix()
    names = datum.names()
    for g in names:
        for h in names:
            if datum.grading(g) == datum.grading(h) and rng.random() < 0.5:
                phi.set(g, h, NovikovElement.term(rng.choice((-2, -1, 1, 2)),
                                                  random_lift(rng)))
            if (datum.grading(g) - 3) % 8 == datum.grading(h) and rng.random() < 0.4:
                mu.set(g, h, NovikovElement.term(rng.choice((-1, 1)),
                                                 random_lift(rng)))
    delta1 = {g: NovikovElement.term(rng.choice((-1, 1)), random_lift(rng))
              for g in names if datum.grading(g) == 1 and rng.random() < 0.5}
    delta2 = {g: NovikovElement.term(rng.choice((-1, 1)), random_lift(rng))
              for g in names if datum.grading(g) == 4 and rng.random() < 0.5}
    return CobordismDatum(datum, datum, phi, mu, delta1, delta2,
                          rng.randint(1, 4))
