import sys
import argparse
import time
import traceback
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import yaml

from algebra import fieldtower as ft
from algebra.errors import BudgetExceeded, OutOfRegime, PreconditionError
from algebra.fieldtower import FieldTower
from codes import codes as cd
from codes import dualnuc as dn
from codes import equivalence as eq
from codes import semifield as sf
from codes.codes import RankMetricCode
from util import report as rp
from util.utils import CodeLiteral, parse_code, parse_element

__author__ = "Erik Hemberg"


"""
Main function for rankmetric. Parses CLI flags and an optional YAML config file and runs one
subcommand.
"""

COMMANDS = (
    "field",
    "construct",
    "mindist",
    "mrd",
    "dual",
    "adjoint",
    "nucleus",
    "spreadset",
    "hk",
    "equiv",
    "auto",
)

FAMILIES = {"G": cd.GABIDULIN, "H": cd.TWISTED, "D": cd.D_FAMILY}

DEFAULTS: Dict[str, Any] = {
    "p": 3,
    "e": 1,
    "n": 2,
    "k": 2,
    "s": 1,
    "t": None,
    "gamma": "auto",
    "theta": None,
    "eta": "w",
    "h": 1,
    "family": "D",
    "side": "right",
    "shape": "all",
    "budget": None,
    "jobs": 1,
    "json": None,
    "oracle": False,
    "seed": 0,
    "samples": None,
    "poly": None,
    "left": None,
    "right": None,
    "isometric": False,
}

ELEMENT_KEYS = ("gamma", "theta", "eta")
CODE_KEYS = ("left", "right")


def parse_arguments(param: List[str]) -> Dict[str, Any]:
    """
    Parse command line arguments (`sys.argv`).

    :return: settings from configuration file and CLI arguments
    :rtype dict:
    """
    parser = argparse.ArgumentParser(description="Run rankmetric")
    parser.add_argument("command", nargs="?", choices=COMMANDS, help="Subcommand")
    parser.add_argument(
        "-f",
        "--configuration_file",
        type=str,
        help="YAML configuration file. E.g. " "tests/configurations/mrd_d_2_1.yml",
    )
    parser.add_argument(
        "-o",
        "--output_dir",
        type=str,
        default=".",
        help="Path to directory for output files. E.g. " "rankmetric_output",
    )
    parser.add_argument("--p", type=int, help="Characteristic")
    parser.add_argument("--e", type=int, help="q = p^e")
    parser.add_argument("--n", type=int, help="Half degree, N = 2n")
    parser.add_argument("--k", type=int, help="Dimension parameter")
    parser.add_argument("--s", type=int, help="Step, coprime to 2n")
    parser.add_argument("--t", type=int, help="Step of the second D code")
    parser.add_argument("--gamma", type=str, help="Element literal: auto, w^k or an integer")
    parser.add_argument("--theta", type=str, help="Parameter of the second D code")
    parser.add_argument("--eta", type=str, help="Twisted Gabidulin eta")
    parser.add_argument("--h", type=int, help="Twisted Gabidulin h")
    parser.add_argument("--family", choices=sorted(FAMILIES), help="Code family")
    parser.add_argument("--side", choices=["left", "middle", "right"], help="Nucleus side")
    parser.add_argument("--shape", choices=list(eq.SHAPES), help="Equivalence map shape")
    parser.add_argument("--budget", type=int, help="Enumeration cap")
    parser.add_argument("--jobs", type=int, help="Worker processes for enumeration")
    parser.add_argument("--json", type=str, help="Extra path for the JSON report")
    parser.add_argument("--oracle", action="store_true", default=None, help="Brute-force checks")
    parser.add_argument("--seed", type=int, help="Random seed")
    parser.add_argument("--samples", type=int, help="Sampled distance instead of enumeration")
    parser.add_argument("--poly", type=int, nargs="+", help="Defining polynomial, constant first")
    parser.add_argument("--left", type=str, help="Code literal, e.g. D:2:1:w")
    parser.add_argument("--right", type=str, help="Code literal, e.g. H:2:1:w:2")
    parser.add_argument("--isometric", action="store_true", default=None, help="Allow adjoint")

    _args = parser.parse_args(param)

    # Read configuration file
    settings: Dict[str, Any] = dict(DEFAULTS)
    if _args.configuration_file:
        with open(_args.configuration_file, "r") as configuration_file:
            settings.update(yaml.load(configuration_file, Loader=yaml.FullLoader) or {})

    # Set CLI arguments in settings
    for key, value in vars(_args).items():
        if value is not None:
            settings[key] = value

    if settings.get("command") not in COMMANDS:
        parser.error("command must be one of {}".format(", ".join(COMMANDS)))
    try:
        for key in ELEMENT_KEYS:
            if settings[key] is not None:
                settings[key] = parse_element(settings[key])
        for key in CODE_KEYS:
            if settings[key] is not None:
                settings[key] = parse_code(settings[key])
    except ValueError as e:
        parser.error(str(e))

    return settings


def build_code(tower: FieldTower, settings: Dict[str, Any]) -> RankMetricCode:
    """Code from --left, else from --family and its parameters."""
    if settings["left"] is not None:
        literal: CodeLiteral = settings["left"]
        return literal.build(tower)

    k, s = settings["k"], settings["s"]
    family = settings["family"]
    if family == "G":
        return cd.make_gabidulin(tower, k, s)
    if family == "H":
        return cd.make_twisted(tower, k, s, settings["eta"].resolve(tower), settings["h"])
    return cd.make_D(tower, k, s, settings["gamma"].resolve(tower))


def _literal(tower: FieldTower, x: Any) -> str:
    return ft.element_literal(tower, x)


def run_field(tower: FieldTower, settings: Dict[str, Any]) -> Dict[str, Any]:
    rows = ft.describe_tower(tower)
    rp.print_table(rows)
    gamma = ft.find_gamma(tower)
    params = sf.hk_params(tower, gamma, settings["s"])
    return {
        "fields": rows,
        "generator": ft.to_int(tower.generator),
        "gamma": _literal(tower, gamma),
        "u": _literal(tower, params.u),
        "v": _literal(tower, params.v),
    }


def run_construct(tower: FieldTower, settings: Dict[str, Any]) -> Dict[str, Any]:
    code = build_code(tower, settings)
    generators = [str(_) for _ in code.generator_polys()]
    for generator in generators:
        print(generator)
    return {"code": cd.code_to_json(code), "label": cd.code_label(code), "generators": generators}


def run_mindist(tower: FieldTower, settings: Dict[str, Any]) -> Dict[str, Any]:
    code = build_code(tower, settings)
    if settings["samples"]:
        rng = np.random.default_rng(settings["seed"])
        sampled = cd.sampled_min_distance(code, settings["samples"], rng)
        return {"label": cd.code_label(code), "mode": "sampled", **sampled}

    result = cd.enumerate_ranks(code, settings["budget"], settings["jobs"])
    witness = result["witness"]
    return {
        "label": cd.code_label(code),
        "mode": "exact",
        "min_distance": result["min_distance"],
        "codewords": result["codewords"],
        "witness_min_rank_codeword": witness.to_json() if witness is not None else None,
    }


def run_mrd(tower: FieldTower, settings: Dict[str, Any]) -> Dict[str, Any]:
    code = build_code(tower, settings)
    certificate = cd.certificate(code, settings["budget"], settings["jobs"], settings["oracle"])
    rp.print_table(
        [
            {
                "code": cd.code_label(code),
                "dim_Fq": certificate["dim_Fq"],
                "d": certificate["min_distance"],
                "mrd": certificate["is_mrd"],
            }
        ]
    )
    return {"label": cd.code_label(code), **certificate}


def run_dual(tower: FieldTower, settings: Dict[str, Any]) -> Dict[str, Any]:
    code = build_code(tower, settings)
    dual = dn.delsarte_dual(code)
    outputs: Dict[str, Any] = {
        "label": cd.code_label(code),
        "dual_label": cd.code_label(dual),
        "dual": cd.code_to_json(dual),
    }
    if code.family == cd.D_FAMILY:
        outputs["substitution_check"] = eq.dual_substitution_check(code)
    if settings["oracle"]:
        outputs["dual_is_mrd"] = cd.is_mrd(dual, settings["budget"], settings["jobs"])
    return outputs


def run_adjoint(tower: FieldTower, settings: Dict[str, Any]) -> Dict[str, Any]:
    code = build_code(tower, settings)
    adjoint = dn.adjoint_code(code)
    outputs: Dict[str, Any] = {
        "label": cd.code_label(code),
        "adjoint_label": cd.code_label(adjoint),
        "adjoint": cd.code_to_json(adjoint),
    }
    if code.family == cd.D_FAMILY:
        k, s, gamma = code.params["k"], code.params["s"], code.params["gamma"]
        expected = cd.make_D(
            tower, k, tower.N - s, ft.frobenius(tower, gamma, tower.N - k * s)
        )
        outputs["equals_D"] = cd.codes_equal(adjoint, expected)
        outputs["expected_label"] = cd.code_label(expected)
    return outputs


def run_nucleus(tower: FieldTower, settings: Dict[str, Any]) -> Dict[str, Any]:
    code = build_code(tower, settings)
    side = settings["side"]
    if side not in dn.SIDES:
        raise OutOfRegime("The {} nucleus is only defined for semifields; use hk".format(side))
    space = dn.nucleus(code, side)
    rows = dn.nucleus_table(code)
    rp.print_table(rows)
    outputs = {
        "label": cd.code_label(code),
        "nucleus": space.to_json(),
        "is_field": dn.is_field(space),
        "table": rows,
    }
    if settings["oracle"]:
        outputs["duality_identities"] = dn.duality_identities(code)
    return outputs


def run_spreadset(tower: FieldTower, settings: Dict[str, Any]) -> Dict[str, Any]:
    params = sf.hk_params(tower, settings["gamma"].resolve(tower), settings["s"])
    code = sf.spread_set(params)
    certificate = cd.certificate(code, settings["budget"], settings["jobs"], settings["oracle"])
    return {
        "params": params.to_json(),
        "label": cd.code_label(code),
        "consistent": sf.spread_set_consistency(params),
        **certificate,
    }


def run_hk(tower: FieldTower, settings: Dict[str, Any]) -> Dict[str, Any]:
    params = sf.hk_params(tower, settings["gamma"].resolve(tower), settings["s"])
    hk = sf.hk_report(params)
    rp.print_table(
        [{"nucleus": side, "size": size} for side, size in hk["nuclei_sizes"].items()]
    )
    return hk


def _theorem_verdict(
    tower: FieldTower, C1: RankMetricCode, C2: RankMetricCode
) -> Optional[Dict[str, Any]]:
    """Closed-form verdict for two D codes with the same k, None outside its regime."""
    if C1.family != cd.D_FAMILY or C2.family != cd.D_FAMILY:
        return None
    if C1.params["k"] != C2.params["k"]:
        return None
    k, s, t = C1.params["k"], C1.params["s"], C2.params["s"]
    gamma, theta = C1.params["gamma"], C2.params["gamma"]
    try:
        if k == tower.n == 2:
            verdict = eq.condition_theorem6(tower, s, t, gamma, theta)
        else:
            verdict = eq.condition_theorem5(tower, k, s, t, gamma, theta)
    except OutOfRegime:
        return None
    return verdict.to_json()


def _equiv_codes(tower: FieldTower, settings: Dict[str, Any]) -> Tuple[RankMetricCode, RankMetricCode]:
    if settings["right"] is not None:
        C1 = build_code(tower, settings)
        return C1, settings["right"].build(tower)

    C1 = build_code(tower, settings)
    k = settings["k"]
    t = settings["t"] if settings["t"] is not None else settings["s"]
    theta = settings["theta"] if settings["theta"] is not None else settings["gamma"]
    return C1, cd.make_D(tower, k, t, theta.resolve(tower))


def run_equiv(tower: FieldTower, settings: Dict[str, Any]) -> Dict[str, Any]:
    C1, C2 = _equiv_codes(tower, settings)
    search: Callable[..., eq.EquivalenceCertificate] = (
        eq.isometric_equivalence if settings["isometric"] else eq.equivalence_search
    )
    certificate = search(C1, C2, settings["shape"], settings["budget"])
    outputs: Dict[str, Any] = {
        "left": cd.code_label(C1),
        "right": cd.code_label(C2),
        **certificate.to_json(),
    }
    theorem = _theorem_verdict(tower, C1, C2)
    if theorem is not None:
        outputs["theorem"] = theorem
        if settings["oracle"] and certificate.verdict != eq.INCONCLUSIVE:
            assert theorem["holds"] == certificate.equivalent, "{} != {}".format(
                theorem["holds"], certificate.verdict
            )
    return outputs


def run_auto(tower: FieldTower, settings: Dict[str, Any]) -> Dict[str, Any]:
    code = build_code(tower, settings)
    shape = settings["shape"] if settings["shape"] != eq.ALL else eq.MONOMIAL
    maps = eq.automorphisms(code, shape, settings["budget"])
    return {
        "label": cd.code_label(code),
        "shape": shape,
        "count": len(maps),
        "maps": [_.to_json() for _ in maps],
    }


RUNNERS: Dict[str, Callable[[FieldTower, Dict[str, Any]], Dict[str, Any]]] = {
    "field": run_field,
    "construct": run_construct,
    "mindist": run_mindist,
    "mrd": run_mrd,
    "dual": run_dual,
    "adjoint": run_adjoint,
    "nucleus": run_nucleus,
    "spreadset": run_spreadset,
    "hk": run_hk,
    "equiv": run_equiv,
    "auto": run_auto,
}


def _inputs(settings: Dict[str, Any]) -> Dict[str, Any]:
    skip = ("command", "configuration_file", "output_dir", "json")
    return {k: v for k, v in settings.items() if k not in skip}


def run(args: List[str]) -> Tuple[int, Dict[str, Any]]:
    """
    Run one subcommand. Exit code 0 on success, 2 on precondition, budget and usage errors,
    1 on anything else.
    """
    start_time = time.time()
    try:
        settings = parse_arguments(args)
    except SystemExit as e:
        return int(e.code or 0), {}

    try:
        tower = ft.build_tower(settings["p"], settings["e"], settings["n"], settings["poly"])
        outputs = RUNNERS[settings["command"]](tower, settings)
        report = rp.normalize(
            {
                "version": rp.REPORT_VERSION,
                "command": settings["command"],
                "argv": [str(_) for _ in args],
                "tower": ft.tower_to_json(tower),
                "inputs": _inputs(settings),
                "outputs": outputs,
                "seed": settings["seed"],
                "duration": time.time() - start_time,
            }
        )
        rp.validate_report(report)
        rp.write_run_output(report, rp.normalize(settings))
    except (PreconditionError, BudgetExceeded) as e:
        print("{}: {}".format(type(e).__name__, e), file=sys.stderr)
        return 2, {}
    except Exception as e:
        traceback.print_exc()
        print("{}: {}".format(type(e).__name__, e), file=sys.stderr)
        return 1, {}

    return 0, report


def main(args: List[str]) -> Dict[str, Any]:
    """
    Run rankmetric.
    """
    code, report = run(args)
    if code != 0:
        sys.exit(code)

    return report


if __name__ == "__main__":
    main(sys.argv[1:])
