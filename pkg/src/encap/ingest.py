"""Reading systems from manifests and from Java-like source trees.

The manifest format is line oriented::

    context flat|layered|hier
    region <name> private=<int> public=<int>          # flat and layered
    penetration <int>                                 # layered, optional header
    layer <int>                                       # layered, opens a layer
    subsystem <name> parent=<name|-> private=<int> public=<int>   # hier

The source scanner is lexical: comments and literals are blanked out, then
type declarations are spotted by keyword and brace depth. It will miss
anything cleverer than ordinary Java layout.
"""

from __future__ import annotations

import logging
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .model import (
    FlatSystem,
    HierTree,
    LabeledCodebase,
    LayeredSystem,
    RegionCounts,
    ValidationError,
    tree_from_parents,
)

log = logging.getLogger(__name__)

Manifest = Union[FlatSystem, LayeredSystem, HierTree]

CONTEXTS = ("flat", "layered", "hier")


class ManifestError(ValidationError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


# -- manifests ----------------------------------------------------------------

_NAME = re.compile(r"^[^\s=#]+$")


def _kv(tok: str, key: str, lineno: int) -> str:
    prefix = key + "="
    if not tok.startswith(prefix):
        raise ManifestError(f"expected {prefix}..., got {tok!r}", lineno)
    return tok[len(prefix):]


def _count(tok: str, key: str, lineno: int) -> int:
    raw = _kv(tok, key, lineno)
    if not raw.isdigit():
        raise ManifestError(f"{key} must be a non-negative decimal integer, got {raw!r}", lineno)
    return int(raw)


def _name(tok: str, lineno: int) -> str:
    if not _NAME.match(tok) or tok == "-":
        raise ManifestError(f"bad name {tok!r}", lineno)
    return tok


def _region_line(toks: list[str], lineno: int) -> tuple[str, RegionCounts]:
    if len(toks) != 4:
        raise ManifestError("expected: region <name> private=<int> public=<int>", lineno)
    return _name(toks[1], lineno), RegionCounts(_count(toks[2], "private", lineno), _count(toks[3], "public", lineno))


def parse_manifest(text: str) -> Manifest:
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ManifestError("empty manifest: missing 'context' line")
    head_no, head = lines[0]
    toks = head.split()
    if len(toks) != 2 or toks[0] != "context" or toks[1] not in CONTEXTS:
        raise ManifestError("first line must be 'context flat|layered|hier'", head_no)
    context = toks[1]
    body = lines[1:]
    if context == "flat":
        return _parse_flat(body)
    if context == "layered":
        return _parse_layered(body)
    return _parse_hier(body)


def _parse_flat(body: list[tuple[int, str]]) -> FlatSystem:
    seen: set[str] = set()
    regions = []
    for lineno, line in body:
        toks = line.split()
        if toks[0] != "region":
            raise ManifestError(f"unexpected {toks[0]!r} in a flat manifest", lineno)
        name, counts = _region_line(toks, lineno)
        if name in seen:
            raise ManifestError(f"duplicate region {name!r}", lineno)
        seen.add(name)
        regions.append(counts)
    return FlatSystem(tuple(regions))


def _parse_layered(body: list[tuple[int, str]]) -> LayeredSystem:
    penetration = None
    layers: dict[int, list[RegionCounts]] = {}
    current: int | None = None
    seen: set[str] = set()
    for lineno, line in body:
        toks = line.split()
        kw = toks[0]
        if kw == "penetration":
            if current is not None or penetration is not None:
                raise ManifestError("penetration must appear once, before any layer", lineno)
            if len(toks) != 2 or not toks[1].isdigit():
                raise ManifestError("expected: penetration <int>", lineno)
            penetration = int(toks[1])
        elif kw == "layer":
            if len(toks) != 2 or not toks[1].isdigit():
                raise ManifestError("expected: layer <int>", lineno)
            current = int(toks[1])
            if current in layers:
                raise ManifestError(f"duplicate layer {current}", lineno)
            layers[current] = []
        elif kw == "region":
            if current is None:
                raise ManifestError("region appears before any layer", lineno)
            name, counts = _region_line(toks, lineno)
            if name in seen:
                raise ManifestError(f"duplicate region {name!r}", lineno)
            seen.add(name)
            layers[current].append(counts)
        else:
            raise ManifestError(f"unexpected {kw!r} in a layered manifest", lineno)
    ordered = [layers[k] for k in sorted(layers)]
    return LayeredSystem(tuple(tuple(x) for x in ordered), penetration)


def _parse_hier(body: list[tuple[int, str]]) -> HierTree:
    rows = []
    seen: dict[str, int] = {}
    for lineno, line in body:
        toks = line.split()
        if toks[0] != "subsystem" or len(toks) != 5:
            raise ManifestError("expected: subsystem <name> parent=<name|-> private=<int> public=<int>", lineno)
        name = _name(toks[1], lineno)
        if name in seen:
            raise ManifestError(f"duplicate subsystem {name!r}", lineno)
        seen[name] = lineno
        par = _kv(toks[2], "parent", lineno)
        counts = RegionCounts(_count(toks[3], "private", lineno), _count(toks[4], "public", lineno))
        rows.append((name, None if par == "-" else par, counts))
    if not rows:
        raise ManifestError("a hier manifest needs a root subsystem")
    for name, par, _ in rows:
        if par is not None and par not in seen:
            raise ManifestError(f"subsystem {name!r} has unknown parent {par!r}", seen[name])
    try:
        return tree_from_parents(rows)
    except ValidationError as exc:
        raise ManifestError(str(exc)) from exc


def serialize_manifest(value: Manifest, names: list[str] | None = None) -> str:
    """Canonical text. Flat and layered regions are named r0, r1, ... unless ``names`` is given."""
    out: list[str] = []
    if isinstance(value, FlatSystem):
        out.append("context flat")
        for i, reg in enumerate(value.regions):
            nm = names[i] if names else f"r{i}"
            out.append(f"region {nm} private={reg.hidden} public={reg.violating}")
    elif isinstance(value, LayeredSystem):
        out.append("context layered")
        if value.penetration is not None:
            out.append(f"penetration {value.penetration}")
        k = 0
        for li, layer in enumerate(value.layers):
            out.append(f"layer {li}")
            for reg in layer:
                nm = names[k] if names else f"r{k}"
                k += 1
                out.append(f"region {nm} private={reg.hidden} public={reg.violating}")
    elif isinstance(value, HierTree):
        out.append("context hier")
        for node, par in value.preorder():
            pname = "-" if par is None else par.name
            out.append(
                f"subsystem {node.name} parent={pname} private={node.counts.hidden} public={node.counts.violating}"
            )
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")
    return "\n".join(out) + "\n"


def load_manifest(path: str | os.PathLike[str]) -> Manifest:
    return parse_manifest(Path(path).read_text(encoding="utf-8"))


# -- Java-like source scanning ------------------------------------------------


def strip_java(src: str) -> str:
    """Blank out comments, string/char literals and text blocks, keeping newlines."""
    out: list[str] = []
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        two = src[i:i + 2]
        if two == "//":
            j = src.find("\n", i)
            j = n if j < 0 else j
            out.append(" " * (j - i))
            i = j
        elif two == "/*":
            j = src.find("*/", i + 2)
            j = n if j < 0 else j + 2
            out.append(re.sub(r"[^\n]", " ", src[i:j]))
            i = j
        elif src.startswith('"""', i):
            j = src.find('"""', i + 3)
            while j > 0 and src[j - 1] == "\\":
                j = src.find('"""', j + 1)
            j = n if j < 0 else j + 3
            out.append(re.sub(r"[^\n]", " ", src[i:j]))
            i = j
        elif c in "\"'":
            j = i + 1
            while j < n and src[j] != c and src[j] != "\n":
                j += 2 if src[j] == "\\" else 1
            j = min(j + 1, n)
            out.append(" " * (j - i))
            i = j
        else:
            out.append(c)
            i += 1
    return "".join(out)


_TOKEN = re.compile(r"@\s*[A-Za-z_][\w.]*|[A-Za-z_$][\w$]*|[{}();=,<>\[\]]|\S")
_TYPE_KW = {"class", "interface", "enum", "record"}
_MODIFIERS = {
    "public", "protected", "private", "static", "final", "abstract", "sealed", "non-sealed",
    "strictfp", "synchronized", "native", "transient", "volatile", "default",
}


@dataclass(frozen=True)
class TypeDecl:
    name: str
    public: bool
    methods: tuple[tuple[str, bool], ...]


def _tokens(src: str) -> list[str]:
    return _TOKEN.findall(strip_java(src))


def _skip_parens(toks: list[str], i: int) -> int:
    """Index just past the parenthesised group opening at ``toks[i]``."""
    depth = 0
    while i < len(toks):
        if toks[i] == "(":
            depth += 1
        elif toks[i] == ")":
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    return i


def parse_java_source(src: str) -> tuple[str, list[TypeDecl]]:
    """Package name and top-level types (with their depth-1 methods) of one file."""
    toks = _tokens(src)
    package = ""
    types: list[TypeDecl] = []
    depth = 0
    mods: list[str] = []
    i = 0
    while i < len(toks):
        t = toks[i]
        if depth == 0 and t == "package" and not mods:
            j = i + 1
            parts = []
            while j < len(toks) and toks[j] != ";":
                parts.append(toks[j])
                j += 1
            package = "".join(parts)
            i = j + 1
            continue
        if depth == 0 and t == "import":
            while i < len(toks) and toks[i] != ";":
                i += 1
            i += 1
            continue
        if t.startswith("@"):
            # annotation, possibly with arguments
            i += 1
            if i < len(toks) and toks[i] == "(":
                i = _skip_parens(toks, i)
            continue
        if depth == 0 and t in _TYPE_KW and i + 1 < len(toks):
            name = toks[i + 1]
            kind = t
            j = i + 2
            while j < len(toks) and toks[j] != "{":
                j += 1
            end, methods = _type_body(toks, j, name, kind)
            types.append(TypeDecl(name, "public" in mods, tuple(methods)))
            mods = []
            i = end
            continue
        if t in _MODIFIERS:
            mods.append(t)
        elif t == "{":
            depth += 1
            mods = []
        elif t == "}":
            depth = max(0, depth - 1)
            mods = []
        elif t == ";":
            mods = []
        i += 1
    return package, types


def _type_body(toks: list[str], start: int, type_name: str, kind: str) -> tuple[int, list[tuple[str, bool]]]:
    """Scan a type body opening at ``toks[start] == '{'``; return (index after it, methods)."""
    methods: list[tuple[str, bool]] = []
    if start >= len(toks):
        return start, methods
    depth = 1
    i = start + 1
    in_constants = kind == "enum"
    seg: list[str] = []  # tokens of the current depth-1 member declaration
    while i < len(toks) and depth > 0:
        t = toks[i]
        if depth == 1:
            if in_constants:
                # enum constants run until the first ';' at depth 1
                if t == ";":
                    in_constants = False
                    seg = []
                elif t == "{":
                    depth += 1
                elif t == "(":
                    i = _skip_parens(toks, i)
                    continue
                elif t == "}":
                    depth -= 1
                i += 1
                continue
            if t.startswith("@"):
                i += 1
                if i < len(toks) and toks[i] == "(":
                    i = _skip_parens(toks, i)
                continue
            if t == "(":
                decl = _method_name(seg, type_name)
                i = _skip_parens(toks, i)
                if decl is not None:
                    # a body or ';' follows (possibly after throws/default)
                    methods.append((decl, "private" not in seg))
                seg.append("()")
                continue
            if t == "{":
                depth += 1
                seg = []
            elif t == ";" or t == "}":
                if t == "}":
                    depth -= 1
                seg = []
            else:
                seg.append(t)
            i += 1
            continue
        if t == "{":
            depth += 1
        elif t == "}":
            depth -= 1
            if depth == 1:
                seg = []
        i += 1
    return i, methods


def _method_name(seg: list[str], type_name: str) -> str | None:
    """The member name if ``seg`` (tokens before '(') declares a method or constructor."""
    if not seg or "=" in seg or "()" in seg:
        return None
    if any(t in _TYPE_KW or t == "new" for t in seg):
        return None
    name = seg[-1]
    if not re.match(r"^[A-Za-z_$][\w$]*$", name):
        return None
    rest = [t for t in seg[:-1] if t not in _MODIFIERS]
    if not rest:
        # constructor: bare name equal to the type
        return name if name == type_name else None
    return name


def _java_files(root: Path) -> list[Path]:
    return sorted(p for p in root.rglob("*.java") if p.is_file())


def _read(path: Path, skipped: list[str]) -> str | None:
    try:
        return path.read_text(encoding="utf-8", errors="replace")
    except OSError as exc:
        log.warning("skipping unreadable %s: %s", path, exc)
        skipped.append(str(path))
        return None


def _check_dir(directory: str | os.PathLike[str]) -> Path:
    root = Path(directory)
    if not root.is_dir():
        raise ValidationError(f"not a directory: {root}")
    return root


def scan_java_tree(directory: str | os.PathLike[str]) -> LabeledCodebase:
    """Class/package graph: packages are regions, top-level types are nodes,
    public types are violations."""
    root = _check_dir(directory)
    regions: dict[str, list[tuple[str, bool]]] = {}
    skipped: list[str] = []
    for path in _java_files(root):
        src = _read(path, skipped)
        if src is None:
            continue
        package, types = parse_java_source(src)
        bucket = regions.setdefault(package, [])
        bucket.extend((t.name, t.public) for t in types)
    for entries in regions.values():
        entries.sort()
    return LabeledCodebase({k: tuple(v) for k, v in regions.items()}, tuple(skipped))


def function_graph_scan(directory: str | os.PathLike[str]) -> LabeledCodebase:
    """Function/type graph: each top-level type is a region named ``package.Type``
    (just ``Type`` in the default package); its methods and constructors are
    nodes, violating unless declared ``private``."""
    root = _check_dir(directory)
    regions: dict[str, list[tuple[str, bool]]] = {}
    skipped: list[str] = []
    for path in _java_files(root):
        src = _read(path, skipped)
        if src is None:
            continue
        package, types = parse_java_source(src)
        for t in types:
            qual = f"{package}.{t.name}" if package else t.name
            regions.setdefault(qual, []).extend(t.methods)
    for entries in regions.values():
        entries.sort()
    return LabeledCodebase({k: tuple(v) for k, v in regions.items()}, tuple(skipped))
