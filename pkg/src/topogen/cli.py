"""Command-line front end.

Every command is a thin shim over the library modules: argument handling,
name resolution, delegation, exit code.  Exit codes: 0 success / all checks
pass, 1 validation or theorem failure, 2 usage or parse error, 3 resource
cap exceeded.
"""

from __future__ import annotations

import argparse
import sys

from .errors import (
    CapabilityError,
    DomainError,
    FormatError,
    PreconditionError,
    ResourceCapError,
    TopogenError,
)
from .harness import fileformat
from .harness.enumeration import EnumerationSpec, enumerate_structures
from .harness.suite import CHECKS, SCALES, run_suite
from .instances import registry
from .instances.topology import fintop_fibration, is_continuous, map_predicates
from .morphisms import classify, strict_subobjects
from .constructions import (
    induce_copointed,
    induce_pointed,
    lift_topogenous,
    validate_copointed,
    validate_pointed,
)
from .structures import (
    closure_from_topogenous,
    interior_from_topogenous,
    nbhd_from_topogenous,
    predicates,
    topogenous_from_closure,
    topogenous_from_interior,
    validate_structure,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


class _Environment:
    """Named entities from input files, layered over the built-ins."""

    def __init__(self, paths):
        self.documents = []
        for path in paths:
            with open(path, "r", encoding="utf-8") as handle:
                self.documents.append(fileformat.parse_document(handle.read()))

    def _find(self, kind, name):
        for doc in self.documents:
            rec = doc.find(kind, name)
            if rec is not None:
                return rec
        return None

    def fibration(self, name: str):
        if name.startswith("spaces:"):
            spaces = []
            labels = []
            for space_name in name[len("spaces:"):].split(","):
                rec = self._find(fileformat.SpaceRecord, space_name.strip())
                if rec is None:
                    raise DomainError(f"no space record named {space_name.strip()!r}")
                spaces.append(rec.space)
                labels.append(rec.name)
            return fintop_fibration(spaces, name=name, object_names=labels)
        return registry.builtin_fibration(name)

    def order(self, name: str, fib):
        rec = self._find(fileformat.OrderRecord, name)
        if rec is not None:
            if name in registry.ORDER_KINDS:
                print(f"warning: file order {name!r} overrides the built-in kind",
                      file=sys.stderr)
            return fileformat.resolve_order(rec, fib)
        return registry.builtin_order(name, fib)

    def morphism(self, name: str, fib) -> int:
        rec = self._find(fileformat.MapRecord, name)
        if rec is not None:
            cat = fib.category
            if name in cat._name_index:
                print(f"warning: file map {name!r} overrides a fibration morphism",
                      file=sys.stderr)
            dom = cat.object_index(rec.source)
            cod = cat.object_index(rec.target)
            key = (dom, cod, rec.graph)
            if key not in cat._by_graph:
                raise DomainError(f"map {name!r} is not a morphism of the fibration")
            return cat._by_graph[key]
        return fib.category.morphism_index(name)


def _emit(text: str, output):
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def _cmd_validate(args) -> int:
    env = _Environment(args.files)
    failures = 0
    for path, doc in zip(args.files, env.documents):
        for rec in doc.records:
            label = f"{path}:{type(rec).__name__[:-6].lower()} {rec.name}"
            if isinstance(rec, (fileformat.SpaceRecord,)):
                print(f"ok {label}")
            elif isinstance(rec, fileformat.GroupRecord):
                from .instances.groups import validate_group

                rep = validate_group(rec.group)
                failures += not rep.ok
                print(("ok " if rep.ok else "FAIL ") + label)
                if not rep.ok:
                    print(rep.render())
            elif isinstance(rec, fileformat.MapRecord):
                src = env._find(fileformat.SpaceRecord, rec.source)
                tgt = env._find(fileformat.SpaceRecord, rec.target)
                if src is None or tgt is None:
                    failures += 1
                    print(f"FAIL {label}: unknown endpoint space")
                    continue
                ok = (
                    len(rec.graph) == src.space.n
                    and all(0 <= v < tgt.space.n for v in rec.graph)
                    and is_continuous(rec.graph, src.space, tgt.space)
                )
                failures += not ok
                print(("ok " if ok else "FAIL ") + label + ("" if ok else ": not continuous"))
            elif isinstance(rec, fileformat.OrderRecord):
                fib = env.fibration(rec.fibration)
                order = fileformat.resolve_order(rec, fib)
                rep = validate_structure(order)
                failures += not rep.ok
                print(("ok " if rep.ok else "FAIL ") + label)
                if not rep.ok:
                    print(rep.render())
            else:
                print(f"ok {label} (syntax only)")
    return EXIT_FAILURE if failures else EXIT_OK


_CONVERTERS = {
    ("topogenous", "closure"): lambda t: closure_from_topogenous(t),
    ("topogenous", "interior"): lambda t: interior_from_topogenous(t),
    ("topogenous", "neighbourhood"): lambda t: nbhd_from_topogenous(t),
    ("closure", "topogenous"): lambda c: topogenous_from_closure(c),
    ("interior", "topogenous"): lambda i: topogenous_from_interior(i),
}


def _cmd_convert(args) -> int:
    env = _Environment(args.files)
    fib = env.fibration(args.fibration)
    key = (args.source_kind, args.target_kind)
    if key not in _CONVERTERS:
        print(f"error: cannot convert {args.source_kind} to {args.target_kind}",
              file=sys.stderr)
        return EXIT_USAGE
    if args.source_kind != "topogenous":
        print("error: conversions here start from a topogenous order record",
              file=sys.stderr)
        return EXIT_USAGE
    order = env.order(args.order, fib)
    rep = validate_structure(order)
    if not rep.ok:
        print(rep.render(), file=sys.stderr)
        return EXIT_FAILURE
    result = _CONVERTERS[key](order)
    if args.target_kind == "neighbourhood":
        record = fileformat.order_record_of(f"{args.order}_as_nbhd", result)
        record = fileformat.OrderRecord(record.name, record.fibration, "explicit", record.rel)
        _emit(fileformat.serialize_record(record) + "\n", args.output)
    else:
        record = fileformat.operator_record_of(f"{args.order}_{args.target_kind}", result, args.target_kind)
        _emit(fileformat.serialize_record(record) + "\n", args.output)
    return EXIT_OK


def _cmd_classify(args) -> int:
    env = _Environment(args.files)
    fib = env.fibration(args.fibration)
    order = env.order(args.order, fib)
    f = env.morphism(args.map, fib)
    cls = classify(f, order)
    flags = {
        "continuous": cls.continuous,
        "strict": cls.strict,
        "final": cls.final,
        "costrict": cls.costrict,
        "initial": cls.initial,
        "weakly_final": cls.weakly_final,
    }
    lines = [f"morphism {fib.category.mor_names[f]}"]
    for key, value in flags.items():
        shown = "n/a" if value is None else ("true" if value else "false")
        lines.append(f"  {key}={shown}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _cmd_strict_subs(args) -> int:
    env = _Environment(args.files)
    fib = env.fibration(args.fibration)
    order = env.order(args.order, fib)
    x = fib.category.object_index(args.object)
    subs = strict_subobjects(x, order)
    labels = [fib.sub[x].labels[m] for m in subs]
    _emit(f"strict subobjects of {args.object}: {', '.join(labels) or '(none)'}\n",
          args.output)
    return EXIT_OK


def _cmd_predicates(args) -> int:
    env = _Environment(args.files)
    fib = env.fibration(args.fibration)
    if args.map:
        f = env.morphism(args.map, fib)
        mp = map_predicates(fib, f)
        _emit(
            f"map {fib.category.mor_names[f]}\n"
            f"  open={str(mp.open).lower()}\n"
            f"  closed={str(mp.closed).lower()}\n"
            f"  initial_topology={str(mp.initial_topology).lower()}\n"
            f"  hereditary_quotient={str(mp.hereditary_quotient).lower()}\n",
            args.output,
        )
        return EXIT_OK
    order = env.order(args.order, fib)
    preds = predicates(order)
    _emit(
        f"order {args.order}\n"
        f"  meet_preserving={str(preds.meet_preserving).lower()}\n"
        f"  join_preserving={str(preds.join_preserving).lower()}\n"
        f"  interpolative={str(preds.interpolative).lower()}\n",
        args.output,
    )
    return EXIT_OK


def _cmd_lift(args) -> int:
    fd = registry.builtin_functor(args.fibration)
    base_order = registry.builtin_order(args.order, fd.base)
    lifted = lift_topogenous(fd, base_order)
    rep = validate_structure(lifted)
    record = fileformat.order_record_of(f"{args.order}_lifted", lifted)
    _emit(fileformat.serialize_record(record) + "\n", args.output)
    if not rep.ok:
        print(rep.render(), file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def _cmd_induce(args) -> int:
    env = _Environment(args.files)
    fib = env.fibration(args.fibration)
    order = env.order(args.order, fib)
    if args.pointed:
        endo = registry.builtin_pointed(args.pointed, fib)
        rep = validate_pointed(endo)
        induced = induce_pointed(endo, order)
        name = f"{args.order}_via_{args.pointed}"
    else:
        endo = registry.builtin_copointed(args.copointed, fib)
        rep = validate_copointed(endo)
        induced = induce_copointed(endo, order)
        name = f"{args.order}_via_{args.copointed}"
    if not rep.ok:
        print(rep.render(), file=sys.stderr)
        return EXIT_FAILURE
    vrep = validate_structure(induced)
    record = fileformat.order_record_of(name, induced)
    _emit(fileformat.serialize_record(record) + "\n", args.output)
    if not vrep.ok:
        print(vrep.render(), file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    fib = registry.builtin_fibration(args.builtin)
    spec = EnumerationSpec(fib, args.kind, prop_filter=args.filter)
    count = 0
    lines = []
    for structure in enumerate_structures(spec):
        if args.kind in ("topogenous", "neighbourhood"):
            rel_holder = structure if args.kind == "topogenous" else None
            if rel_holder is None:
                from .structures import topogenous_from_nbhd

                rel_holder = topogenous_from_nbhd(structure)
            record = fileformat.order_record_of(f"{args.kind}_{count:04d}", rel_holder)
            lines.append(fileformat.serialize_record(record))
        else:
            record = fileformat.operator_record_of(
                f"{args.kind}_{count:04d}", structure, args.kind)
            lines.append(fileformat.serialize_record(record))
        count += 1
    summary = f"# {count} {args.kind} structures on {args.builtin}"
    body = summary + "\n" if args.count_only else "\n".join([*lines, summary]) + "\n"
    _emit(body, args.output)
    return EXIT_OK


def _cmd_suite(args) -> int:
    targets = args.targets.split(",") if args.targets else None
    report = run_suite(args.scale, targets)
    _emit(report.render_text(), args.output)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            handle.write(report.render_json())
    for entry in report.entries:
        print(f"timing {entry.check_id} {entry.wall:.3f}s", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAILURE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topogen",
        description="Topogenous structures on finite concrete categories",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate records in instance files")
    p.add_argument("files", nargs="+")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("convert", help="convert between structure kinds")
    p.add_argument("--from", dest="source_kind", required=True,
                   choices=("topogenous", "closure", "interior"))
    p.add_argument("--to", dest="target_kind", required=True,
                   choices=("topogenous", "closure", "interior", "neighbourhood"))
    p.add_argument("--order", required=True)
    p.add_argument("--fibration", default="fintop2")
    p.add_argument("-o", "--output")
    p.add_argument("files", nargs="*")
    p.set_defaults(fn=_cmd_convert)

    p = sub.add_parser("classify", help="classify a morphism against an order")
    p.add_argument("--order", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--fibration", default="fintop2")
    p.add_argument("-o", "--output")
    p.add_argument("files", nargs="*")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("strict-subs", help="strict subobjects of an object")
    p.add_argument("--order", required=True)
    p.add_argument("--object", required=True)
    p.add_argument("--fibration", default="fintop2")
    p.add_argument("-o", "--output")
    p.add_argument("files", nargs="*")
    p.set_defaults(fn=_cmd_strict_subs)

    p = sub.add_parser("predicates", help="predicates of a map or an order")
    p.add_argument("--map")
    p.add_argument("--order")
    p.add_argument("--fibration", default="fintop2")
    p.add_argument("-o", "--output")
    p.add_argument("files", nargs="*")
    p.set_defaults(fn=_cmd_predicates)

    p = sub.add_parser("lift", help="lift a base order along a fibered functor")
    p.add_argument("--fibration", default="topgrp_le4")
    p.add_argument("--order", default="grp_normal")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_lift)

    p = sub.add_parser("induce", help="order induced by a (co)pointed endofunctor")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--pointed")
    group.add_argument("--copointed")
    p.add_argument("--order", required=True)
    p.add_argument("--fibration", default="fintop2")
    p.add_argument("-o", "--output")
    p.add_argument("files", nargs="*")
    p.set_defaults(fn=_cmd_induce)

    p = sub.add_parser("enumerate", help="enumerate structures on a built-in fibration")
    p.add_argument("--builtin", required=True)
    p.add_argument("--kind", required=True,
                   choices=("topogenous", "closure", "interior", "neighbourhood"))
    p.add_argument("--filter", choices=("meet", "join", "interpolative"))
    p.add_argument("--count-only", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("suite", help="run the theorem suite")
    p.add_argument("--scale", default="small", choices=SCALES)
    p.add_argument("--targets", help="comma-separated check ids "
                   f"(known: {', '.join(sorted(CHECKS))})")
    p.add_argument("-o", "--output")
    p.add_argument("--json")
    p.set_defaults(fn=_cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except PreconditionError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"witness: {exc.witness}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TopogenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
