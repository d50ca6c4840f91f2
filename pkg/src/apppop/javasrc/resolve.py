"""Best-effort name resolution over a parsed corpus.

Priority for a simple type name: same file -> same package -> explicit
import -> wildcard import -> unique simple name in corpus -> external.
Everything unresolved is treated as external; there is no type inference
beyond declared types of fields, parameters, and locals.
"""

from __future__ import annotations

from collections import defaultdict

from .model import ClassInfo, MethodInfo, StructuralModel


def _build_indexes(model: StructuralModel):
    qualified = {}
    simple = defaultdict(list)
    per_unit = defaultdict(dict)
    per_package = defaultdict(dict)
    for cls in model.classes:
        qualified[cls.qualified_name] = cls
        simple[cls.simple_name].append(cls.qualified_name)
        per_unit[cls.unit_path].setdefault(cls.simple_name, cls.qualified_name)
        per_package[cls.package].setdefault(cls.simple_name, cls.qualified_name)
    for names in simple.values():
        names.sort()
    return qualified, simple, per_unit, per_package


class _Resolver:
    def __init__(self, model: StructuralModel):
        self.model = model
        self.qualified, self.simple, self.per_unit, self.per_package = _build_indexes(model)
        self.unit_by_path = {u.path: u for u in model.units}

    def resolve_type(self, raw: str, cls: ClassInfo) -> str | None:
        if not raw or raw in ("var",):
            return None
        if "." in raw:
            if raw in self.qualified:
                return raw
            pkg_guess = f"{cls.package}.{raw}" if cls.package else raw
            if pkg_guess in self.qualified:
                return pkg_guess
            head, _, rest = raw.partition(".")
            head_qual = self.resolve_type(head, cls)
            if head_qual:
                nested = f"{head_qual}.{rest}"
                if nested in self.qualified:
                    return nested
            return None
        unit = self.unit_by_path.get(cls.unit_path)
        local = self.per_unit.get(cls.unit_path, {})
        if raw in local:
            return local[raw]
        pkg = self.per_package.get(cls.package, {})
        if raw in pkg:
            return pkg[raw]
        if unit is not None:
            for imp in unit.imports:
                if imp.endswith("." + raw) or imp == raw:
                    return imp if imp in self.qualified else None
            wildcard_hits = []
            for imp in unit.imports:
                if imp.endswith(".*"):
                    cand = imp[:-2] + "." + raw
                    if cand in self.qualified:
                        wildcard_hits.append(cand)
            if len(wildcard_hits) == 1:
                return wildcard_hits[0]
            if len(wildcard_hits) > 1:
                return None
        cands = self.simple.get(raw, [])
        if len(cands) == 1:
            return cands[0]
        return None

    def superclass_chain(self, cls: ClassInfo) -> list[ClassInfo]:
        """Internal superclass chain starting at cls (cycle-guarded)."""
        chain = [cls]
        seen = {cls.qualified_name}
        cur = cls
        while cur.resolved_superclass and cur.resolved_superclass not in seen:
            nxt = self.qualified.get(cur.resolved_superclass)
            if nxt is None:
                break
            chain.append(nxt)
            seen.add(nxt.qualified_name)
            cur = nxt
        return chain

    def enclosing_chain(self, cls: ClassInfo) -> list[ClassInfo]:
        chain = []
        cur = cls
        seen = set()
        while cur.enclosing and cur.enclosing not in seen:
            seen.add(cur.enclosing)
            outer = self.qualified.get(cur.enclosing)
            if outer is None:
                break
            chain.append(outer)
            cur = outer
        return chain

    def find_method(self, start: ClassInfo, name: str, arity: int) -> MethodInfo | None:
        """Nearest declaration up the internal superclass chain; exact arity
        preferred, otherwise the lowest-arity same-name overload."""
        for cls in self.superclass_chain(start):
            candidates = [m for m in cls.methods if not m.is_constructor and m.name == name]
            if not candidates:
                continue
            exact = [m for m in candidates if m.arity == arity]
            if exact:
                return exact[0]
            return min(candidates, key=lambda m: m.arity)
        return None

    def field_type(self, start: ClassInfo, name: str) -> str | None:
        for cls in self.superclass_chain(start):
            for f in cls.fields:
                if f.name == name:
                    return f.raw_type
        return None

    def resolve_receiver_class(self, receiver: str, cls: ClassInfo, meth: MethodInfo) -> ClassInfo | None:
        as_type = self.resolve_type(receiver, cls)
        if as_type:
            return self.qualified.get(as_type)
        segments = receiver.split(".")
        first = segments[0]
        raw_type = meth.local_var_types.get(first)
        if raw_type is None:
            for pname, ptype in meth.parameters:
                if pname == first:
                    raw_type = ptype
                    break
        if raw_type is None:
            raw_type = self.field_type(cls, first)
            if raw_type is None:
                for outer in self.enclosing_chain(cls):
                    raw_type = self.field_type(outer, first)
                    if raw_type is not None:
                        break
        if raw_type is None:
            return None
        cur = self.qualified.get(self.resolve_type(raw_type, cls) or "")
        for seg in segments[1:]:
            if cur is None:
                return None
            nxt_type = self.field_type(cur, seg)
            if nxt_type is None:
                return None
            cur = self.qualified.get(self.resolve_type(nxt_type, cur) or "")
        return cur

    def resolve_call(self, cls: ClassInfo, meth: MethodInfo, receiver: str | None, name: str, arity: int) -> MethodInfo | None:
        if receiver is None:
            # bare or this-qualified: own class chain, then enclosing classes
            for scope in [cls] + self.enclosing_chain(cls):
                found = self.find_method(scope, name, arity)
                if found is not None:
                    return found
            return None
        if receiver == "super":
            chain = self.superclass_chain(cls)
            if len(chain) < 2:
                return None
            return self.find_method(chain[1], name, arity)
        if receiver == "<expr>":
            return None
        target = self.resolve_receiver_class(receiver, cls, meth)
        if target is None:
            return None
        return self.find_method(target, name, arity)


def resolve(model: StructuralModel) -> StructuralModel:
    """Resolve type references and call targets in place; returns the model."""
    r = _Resolver(model)
    model.resolution_index = r.qualified
    for cls in model.classes:
        cls.resolved_superclass = r.resolve_type(cls.superclass_name, cls) if cls.superclass_name else None
        cls.resolved_interfaces = sorted(
            {q for q in (r.resolve_type(n, cls) for n in cls.interface_names) if q}
        )
        refs = set()
        for raw in cls.type_refs:
            q = r.resolve_type(raw, cls)
            if q:
                refs.add(q)
        if cls.resolved_superclass:
            refs.add(cls.resolved_superclass)
        refs.update(cls.resolved_interfaces)
        cls.resolved_refs = refs

    model.method_calls = {}
    model.method_callers = defaultdict(set)
    model.static_invocation_counts = defaultdict(int)
    for cls in model.classes:
        for meth in cls.methods:
            mid = meth.method_id
            targets: list[tuple[str, str, int]] = []
            for inv in meth.invocations:
                found = r.resolve_call(cls, meth, inv.receiver, inv.name, inv.arg_count)
                if found is None:
                    continue
                targets.append(found.method_id)
                model.method_callers[found.method_id].add(mid)
                cls.resolved_refs.add(found.declaring_class)
                if "static" in found.modifiers:
                    model.static_invocation_counts[cls.qualified_name] += 1
            model.method_calls[mid] = targets
        cls.resolved_refs.discard(cls.qualified_name)
    model.method_callers = dict(model.method_callers)
    model.static_invocation_counts = dict(model.static_invocation_counts)
    model.resolved = True
    return model
