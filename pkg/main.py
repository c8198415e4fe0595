"""
Main application file for superquant

Command-line entry point: resolves Cartan data and bialgebra inputs, runs the
verification routines and prints one report document.
Run with: python main.py <command> [options]
"""

import argparse
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from algebra.cartan import CartanDatum, builtin, formula_block_matches, q_binomial, validate
from algebra.errors import (
    AxiomFailure,
    CapExceeded,
    ConfigError,
    InvalidDatum,
    NonHomogeneous,
    NotQuasitriangular,
    SingularPhi,
    SuperQuantError,
    UnsupportedFamily,
    UnsupportedShape,
    WeightMismatch,
)
from algebra.freesuper import format_element, format_word, parse_element, weights_up_to
from algebra.hadic import verify_quantization
from algebra.liebialg import LieSBA, double, upsilon, verify_double
from algebra.lusztig_form import lusztig_form
from algebra.matmodels import (
    cartan_form_nondegenerate,
    cartan_from_model,
    check_defining_relations,
    manin_check,
    pbw_weight_counts,
    symmetrized_matches_gram,
)
from algebra.reports import CheckReport, VerificationReport, stopwatch
from algebra.scalars import LaurentPoly, specialize_q1
from algebra.serre import drinfeld_jimbo_check, quantum_serre, specialization_check, verify_kernel
from components.charts import ChartComponents
from config import (
    APP_CONFIG,
    DEFAULT_SERRE_CAP,
    FORM_DEGREE_CAP,
    EXIT_FAILURE,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    FAMILY_CHOICES,
    LOG_FORMAT,
    LOG_LEVEL,
    MAX_WORKERS,
    PBW_DEGREE_CAP,
    QUASITRIANGULAR_SEEDS,
    SEED_BIALGEBRAS,
    SUITE_BINOMIAL_RANGE,
    SUITE_KERNEL_GENERATION,
    SUITE_KERNEL_MEMBERSHIP,
    SUITE_MATRIX_MODELS,
    SUITE_QUOTIENT_CAP,
)
from data.loader import DatumLoader
from data.processor import ReportProcessor
from utils.formatters import ReportFormatter
from utils.validators import ConfigValidator, parse_weight

logger = logging.getLogger(__name__)

INPUT_ERRORS = (
    ConfigError, InvalidDatum, UnsupportedFamily, UnsupportedShape,
    CapExceeded, NonHomogeneous, WeightMismatch, SingularPhi,
)


def _datum_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--family", choices=FAMILY_CHOICES, help="Built-in Cartan family")
    parent.add_argument("--m", type=int, help="m of sl(m|n), B(m,n) or D(m,n)")
    parent.add_argument("--n", type=int, help="n of sl(m|n), B(0,n), B(m,n), C(n) or D(m,n)")
    parent.add_argument("--alpha", help="alpha of D(2,1;alpha), an exact rational such as 1/2")
    parent.add_argument("--config", help="TOML or JSON file with a Cartan table")
    return parent


def _output_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    mode = parent.add_mutually_exclusive_group()
    mode.add_argument("--json", dest="output", action="store_const", const="json", help="JSON report (default)")
    mode.add_argument("--text", dest="output", action="store_const", const="text", help="Text report")
    parent.set_defaults(output="json")
    parent.add_argument("--out", help="Also write the report to this file")
    parent.add_argument("--chart", help="Write a plotly HTML chart to this file")
    parent.add_argument("--verbose", action="store_true", help="Debug logging and full report detail")
    return parent


def _bialgebra_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--input", help="TOML or JSON file with a bialgebra table")
    parent.add_argument("--seed", help="Name of a built-in seed bialgebra")
    return parent


class SuperQuantApp:
    """Main application class for superquant"""

    def __init__(self):
        self.loader = DatumLoader()
        self.processor = ReportProcessor()
        self.parser = self.build_parser()
        self._chart = None
        self._last_report: Optional[CheckReport] = None

    def build_parser(self) -> argparse.ArgumentParser:
        """Parser with one subcommand per verification driver"""
        parser = argparse.ArgumentParser(prog=APP_CONFIG["prog"], description=APP_CONFIG["description"])
        parser.add_argument("--version", action="version", version=f"%(prog)s {APP_CONFIG['version']}")
        sub = parser.add_subparsers(dest="command", required=True)
        datum, output, bialgebra = _datum_options(), _output_options(), _bialgebra_options()

        cartan = sub.add_parser("cartan", parents=[datum, output], help="Show and validate a Cartan datum")
        cartan.add_argument("action", choices=["show"])

        gram = sub.add_parser("gram", parents=[datum, output], help="Gram blocks of the form C")
        gram.add_argument("--weight", help="Single weight such as 1,2,1")
        gram.add_argument("--cap", type=int, default=DEFAULT_SERRE_CAP, help="Largest total degree")

        check = sub.add_parser("check", parents=[datum, output], help="Check relations against Ker(C)")
        check.add_argument("what", choices=["serre"])
        check.add_argument("--cap", type=int, default=DEFAULT_SERRE_CAP)
        check.add_argument("--no-slices", dest="slices", action="store_false", help="Skip ideal-slice comparison")
        check.add_argument("--relation", action="append", default=[],
                           help="Extra element to test, e.g. 't1*t2 - q*t2*t1' (repeatable)")

        check_serre = sub.add_parser("check-serre", parents=[datum, output], help="Same as 'check serre'")
        check_serre.add_argument("--cap", type=int, default=DEFAULT_SERRE_CAP)
        check_serre.add_argument("--no-slices", dest="slices", action="store_false")
        check_serre.add_argument("--relation", action="append", default=[])

        sub.add_parser("double", parents=[bialgebra, output], help="Build and verify the double")

        hadic = sub.add_parser("hadic", parents=[bialgebra, output], help="Order-h quantization checks")
        hadic.add_argument("--cap", type=int, default=PBW_DEGREE_CAP, help="PBW degree cap")

        oracle = sub.add_parser("oracle", parents=[output], help="Matrix-model oracles")
        oracle.add_argument("what", choices=["cartan"])
        oracle.add_argument("--m", type=int, required=True)
        oracle.add_argument("--n", type=int, required=True)

        suite = sub.add_parser("suite", parents=[output], help="Run the built-in verification corpus")
        suite.add_argument("--all", action="store_true", help="Include the slow kernel-generation runs")
        return parser

    def setup_logging(self, verbose: bool):
        """Logs go to stderr; stdout carries only the report"""
        logging.basicConfig(
            level=logging.DEBUG if verbose else getattr(logging, LOG_LEVEL),
            format=LOG_FORMAT,
            stream=sys.stderr,
            force=True,
        )

    # Input resolution

    def resolve_datum(self, args: argparse.Namespace) -> CartanDatum:
        params = {"m": args.m, "n": args.n, "alpha": args.alpha}
        return self.loader.load_datum(args.family, params, args.config)

    def check_cap(self, args: argparse.Namespace):
        ok, message = ConfigValidator.validate_cap(getattr(args, "cap", 1))
        if not ok:
            raise ConfigError(message, field="cap")

    # Commands

    def cmd_cartan(self, args: argparse.Namespace) -> CheckReport:
        datum = self.resolve_datum(args)
        report = validate(datum)
        block = formula_block_matches(datum)
        if block is not None:
            report.add("formula_block", block, None if block else "3x3 block around the odd root differs")
        report.info.update({"datum": datum.to_config(), "provenance": datum.provenance})
        return report

    def cmd_gram(self, args: argparse.Namespace) -> CheckReport:
        self.check_cap(args)
        datum = self.resolve_datum(args)
        form = lusztig_form(datum, max(args.cap, FORM_DEGREE_CAP))
        weights = [parse_weight(args.weight, datum.s)] if args.weight else weights_up_to(datum.s, args.cap)
        report = VerificationReport(f"gram {datum.label}")
        with stopwatch() as timing:
            blocks = form.gram_blocks(weights)
        for block in blocks:
            detail = block.to_dict(entries=args.verbose)
            if args.verbose:
                detail["quotient_basis"] = [format_word(w) for w in form.quotient_basis(block.weight)]
                detail["symmetric"] = block.is_symmetric()
            report.add(f"gram:{','.join(map(str, block.weight))}", True, **detail)
        report.info.update({"datum": datum.label, "cap": args.cap, "weights": len(blocks),
                            "elapsed_ms": timing["elapsed_ms"]})
        self._chart = ChartComponents.create_rank_chart(self.processor.gram_frame(blocks), datum.label)
        return report

    def cmd_check_serre(self, args: argparse.Namespace) -> CheckReport:
        self.check_cap(args)
        datum = self.resolve_datum(args)
        relations = quantum_serre(datum)
        report = verify_kernel(datum, args.cap, relations, slices=args.slices)
        report.extend(specialization_check(datum))
        report.extend(drinfeld_jimbo_check(datum))
        form = lusztig_form(datum, max(args.cap, FORM_DEGREE_CAP))
        for text in args.relation:
            element = parse_element(text, datum)
            witness = form.kernel_witness(element)
            report.add(f"kernel:{text}", witness is None,
                       None if witness is None else f"C({format_word(witness)}, {text}) != 0",
                       relation=format_element(element))
        if args.verbose:
            report.info["relation_elements"] = {label: format_element(rel) for label, rel in relations}
            m = datum.odd_index
            if "C" in relations.labels:
                x = (m + 1, m, m - 1, m)
                table = lusztig_form(datum).pairing_table(x, relations.get("C"))
                report.info["pairing_table"] = {"x": format_word(x), "values": [str(a) for a in table]}
        if args.chart:
            blocks = lusztig_form(datum, max(args.cap, FORM_DEGREE_CAP)).gram_blocks(weights_up_to(datum.s, args.cap))
            self._chart = ChartComponents.create_rank_chart(self.processor.gram_frame(blocks), datum.label)
        return report

    def cmd_double(self, args: argparse.Namespace) -> CheckReport:
        name, g, r = self.loader.load_bialgebra(args.input, args.seed)
        return self._double_report(name, g, r)

    def _double_report(self, name: str, g: LieSBA, r: Optional[np.ndarray]) -> CheckReport:
        try:
            dd = double(g)
        except AxiomFailure as e:
            report = VerificationReport(f"double of {name}")
            report.add("axioms", False, f"{e} {e.witness or ''}".strip())
            return report
        report = verify_double(dd)
        report.title = f"double of {name}"
        report.info["double"] = dd.to_dict()
        if r is not None:
            try:
                _, sub = upsilon(g, r)
                report.extend(sub, prefix="upsilon:")
                report.info["upsilon_restriction_sign"] = sub.info["restriction_sign"]
            except NotQuasitriangular as e:
                report.add("upsilon:quasitriangular", False, str(e))
        return report

    def cmd_hadic(self, args: argparse.Namespace) -> CheckReport:
        self.check_cap(args)
        name, g, _ = self.loader.load_bialgebra(args.input, args.seed)
        return self._hadic_report(name, g, args.cap)

    def _hadic_report(self, name: str, g: LieSBA, cap: int) -> CheckReport:
        try:
            dd = double(g)
        except AxiomFailure as e:
            report = VerificationReport(f"hadic {name}")
            report.add("axioms", False, f"{e} {e.witness or ''}".strip())
            return report
        report = verify_quantization(dd, cap)
        report.title = f"hadic {name}"
        return report

    def cmd_oracle(self, args: argparse.Namespace) -> CheckReport:
        return self._oracle_report(args.m, args.n)

    def _oracle_report(self, m: int, n: int) -> CheckReport:
        datum = cartan_from_model(m, n)
        report = VerificationReport(f"oracle cartan sl({m}|{n})")
        expected = builtin("sl", m=m, n=n)
        ok = datum == expected
        report.add("matches_builtin", ok, None if ok else f"model gives {datum.a}, table gives {expected.a}")
        ok = symmetrized_matches_gram(m, n)
        report.add("symmetrized_matches_gram", ok, None if ok else "a_ji / d_i differs from (h_i, h_j)")
        report.extend(check_defining_relations(m, n), prefix="relations:")
        if m != n:
            ok = cartan_form_nondegenerate(m, n)
            report.add("cartan_form_nondegenerate", ok, None if ok else "supertrace form degenerate on h")
            report.extend(manin_check(m, n), prefix="manin:")
        report.info["datum"] = datum.to_config()
        return report

    # Suite

    def suite_tasks(self, include_slow: bool) -> List[Tuple[str, Callable[[], CheckReport]]]:
        """Ordered (name, task) pairs of the built-in corpus"""
        tasks: List[Tuple[str, Callable[[], CheckReport]]] = [("worked-example", worked_example_report)]
        for params in SUITE_KERNEL_MEMBERSHIP:
            datum = builtin(**params_for(params))
            tasks.append((f"kernel[{datum.label}]",
                          lambda d=datum: verify_kernel(d, DEFAULT_SERRE_CAP, slices=False)))
        if include_slow:
            for params, cap in SUITE_KERNEL_GENERATION:
                datum = builtin(**params_for(params))
                tasks.append((f"generation[{datum.label}]", lambda d=datum, c=cap: verify_kernel(d, c)))
        for m, n in SUITE_MATRIX_MODELS:
            tasks.append((f"quotient[sl({m}|{n})]", lambda m=m, n=n: quotient_report(m, n, SUITE_QUOTIENT_CAP)))
            tasks.append((f"matrix[sl({m}|{n})]", lambda m=m, n=n: self._oracle_report(m, n)))
        for name in SEED_BIALGEBRAS:
            tasks.append((f"double[{name}]", lambda name=name: self._seed_double(name)))
            tasks.append((f"hadic[{name}]", lambda name=name: self._seed_hadic(name)))
        for name in QUASITRIANGULAR_SEEDS:
            tasks.append((f"upsilon[{name}]", lambda name=name: self._seed_upsilon(name)))
        tasks.append(("q-binomial", lambda: binomial_report(SUITE_BINOMIAL_RANGE)))
        return tasks

    def _seed_double(self, name: str) -> CheckReport:
        g, _ = self.loader.bialgebra_from_mapping(SEED_BIALGEBRAS[name])
        return self._double_report(name, g, None)

    def _seed_hadic(self, name: str) -> CheckReport:
        g, _ = self.loader.bialgebra_from_mapping(SEED_BIALGEBRAS[name])
        return self._hadic_report(name, g, PBW_DEGREE_CAP)

    def _seed_upsilon(self, name: str) -> CheckReport:
        g, r = self.loader.bialgebra_from_mapping(QUASITRIANGULAR_SEEDS[name])
        report = VerificationReport(f"upsilon {name}")
        try:
            _, sub = upsilon(g, r)
        except NotQuasitriangular as e:
            report.add("quasitriangular", False, str(e))
            return report
        report.extend(sub)
        report.info.update(sub.info)
        return report

    def cmd_suite(self, args: argparse.Namespace) -> CheckReport:
        tasks = self.suite_tasks(args.all)
        report = VerificationReport("suite" + (" --all" if args.all else ""))

        def run_task(task: Callable[[], CheckReport]) -> CheckReport:
            try:
                return task()
            except SuperQuantError as e:
                failed = VerificationReport("task error")
                failed.add("error", False, f"{type(e).__name__}: {e}")
                return failed

        with ThreadPoolExecutor(max_workers=min(MAX_WORKERS, len(tasks))) as executor:
            future_to_name = {executor.submit(run_task, task): name for name, task in tasks}
            outcomes = {future_to_name[future]: future.result() for future in future_to_name}

        for name, _ in tasks:
            outcome = outcomes[name]
            report.extend(outcome, prefix=f"{name}:")
            logger.info(f"Suite task {name} {'passed' if outcome.passed else 'failed'}")
        report.info["tasks"] = [name for name, _ in tasks]
        report.info["groups"] = self.processor.group_by_prefix(report).to_dict(orient="records")
        return report

    # Driver

    COMMANDS = {
        "cartan": "cmd_cartan",
        "gram": "cmd_gram",
        "check": "cmd_check_serre",
        "check-serre": "cmd_check_serre",
        "double": "cmd_double",
        "hadic": "cmd_hadic",
        "oracle": "cmd_oracle",
        "suite": "cmd_suite",
    }

    def run(self, args: argparse.Namespace) -> Tuple[int, Dict[str, Any]]:
        """
        Execute one command

        Args:
            args: parsed command line

        Returns:
            Tuple of (exit code, report document)
        """
        self._chart = None
        command = " ".join(
            part for part in (args.command, getattr(args, "action", None), getattr(args, "what", None)) if part
        )
        try:
            with stopwatch() as timing:
                report = getattr(self, self.COMMANDS[args.command])(args)
        except INPUT_ERRORS as e:
            logger.error(f"{command}: {type(e).__name__}: {e}")
            return EXIT_INPUT_ERROR, ReportFormatter.error_document(e, command, self.loader.error_log)
        except (AxiomFailure, NotQuasitriangular) as e:
            logger.error(f"{command}: {e}")
            report = VerificationReport(command)
            report.add(type(e).__name__, False, str(e))

        document = {
            "command": command,
            "passed": report.passed,
            "report": report.to_dict(),
            "summary": {key: value for key, value in self.processor.summary_stats(report).items()
                        if key != "Total Time (ms)"},
            "versions": versions(),
            "elapsed_ms": timing["elapsed_ms"],
        }
        self._last_report = report
        return (EXIT_OK if report.passed else EXIT_FAILURE), document

    def emit(self, code: int, document: Dict[str, Any], args: argparse.Namespace) -> str:
        if args.output == "text" and code != EXIT_INPUT_ERROR:
            text = ReportFormatter.format_text(self._last_report, verbose=args.verbose)
        else:
            text = ReportFormatter.to_json(document)
        sys.stdout.write(text)
        if args.out:
            Path(args.out).parent.mkdir(parents=True, exist_ok=True)
            Path(args.out).write_text(text, encoding="utf-8")
            logger.info(f"Report written to {args.out}")
        if args.chart and code != EXIT_INPUT_ERROR:
            figure = self._chart
            if figure is None:
                figure = ChartComponents.create_timing_chart(self.processor.results_frame(self._last_report))
            ChartComponents.write_chart(figure, args.chart)
        return text

    def main(self, argv: Optional[Sequence[str]] = None) -> int:
        args = self.parser.parse_args(argv)
        self.setup_logging(args.verbose)
        code, document = self.run(args)
        self.emit(code, document, args)
        return code


def params_for(entry: Dict[str, Any]) -> Dict[str, Any]:
    params = dict(entry)
    return {"type_tag": params.pop("family"), **params}


def versions() -> Dict[str, str]:
    return {"superquant": APP_CONFIG["version"], "sympy": sympy.__version__, "numpy": np.__version__}


def worked_example_report() -> CheckReport:
    """Pairings of t3 t2 t1 t2 against the five words of the C relation of sl(2|2)"""
    datum = builtin("sl", m=2, n=2)
    form = lusztig_form(datum)
    relation = quantum_serre(datum).get("C")
    q = datum.context.q(1)
    c = form.generator_value(2) * form.generator_value(0)
    expected = [
        (1 - q * q) * c,
        datum.context.zero,
        datum.context.zero,
        (q.inverse() * q.inverse() - 1) * c,
        (q.inverse() - q) * c,
    ]
    report = VerificationReport("worked example sl(2|2)")
    with stopwatch() as timing:
        values = form.pairing_table((2, 1, 0, 1), relation)
    for k, (value, target) in enumerate(zip(values, expected), start=1):
        report.add(f"a{k}", value == target, None if value == target else f"a{k} = {value}, expected {target}",
                   value=str(value))
    total = values[0] + values[1] + values[2] + values[3] - (q + q.inverse()) * values[4]
    report.add("total", not total, None if not total else f"sum is {total}", elapsed_ms=timing["elapsed_ms"])
    return report


def quotient_report(m: int, n: int, cap: int) -> CheckReport:
    """Gram ranks against PBW counts of the matrix-model root vectors"""
    datum = builtin("sl", m=m, n=n)
    form = lusztig_form(datum, max(cap, FORM_DEGREE_CAP))
    blocks = form.gram_blocks(weights_up_to(datum.s, cap))
    counts = pbw_weight_counts(m, n, cap)
    df = ReportProcessor.quotient_comparison(blocks, counts)
    report = VerificationReport(f"quotient dimensions sl({m}|{n})")
    for row in df.itertuples(index=False):
        report.add(f"rank:{row.weight}", bool(row.match),
                   None if row.match else f"rank {row.rank} vs PBW {row.pbw_count}",
                   rank=int(row.rank), pbw_count=int(row.pbw_count))
    return report


def binomial_report(top: int) -> CheckReport:
    """q-binomial symmetry and q -> 1 limits, and q -> 1 of B relations with |a_ij| up to 3"""
    report = VerificationReport("q-binomial")
    t = LaurentPoly.monomial(1)
    symmetric, classical = True, True
    for a in range(top + 1):
        for b in range(a + 1):
            value = q_binomial(a, b, t)
            symmetric = symmetric and value == q_binomial(a, a - b, t)
            classical = classical and specialize_q1(value) == math.comb(a, b)
    report.add("symmetry", symmetric, None if symmetric else "q_binomial(a, b) != q_binomial(a, a - b)")
    report.add("q1_limit", classical, None if classical else "q_binomial at q = 1 differs from comb")
    g2 = CartanDatum.create([[2, -1], [-3, 2]], [], [1, "1/3"], label="G2")
    b2 = CartanDatum.create([[2, -1], [-2, 2]], [], [1, "1/2"], label="B2")
    for datum in (builtin("sl", m=3, n=0), b2, g2):
        report.extend(specialization_check(datum), prefix=f"{datum.label}:")
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main function to run the application"""
    app = SuperQuantApp()
    return app.main(argv)


if __name__ == "__main__":
    sys.exit(main())
