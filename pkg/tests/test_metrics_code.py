import itertools
import math
import random

from apppop.javasrc import build_graph, parse_unit, resolve
from apppop.javasrc.model import StructuralModel
from apppop.metrics.code import (
    all_class_rows,
    all_method_rows,
    class_metrics,
    cyclomatic,
    lcom_value,
    method_metrics,
    readability,
)


def build_model(files: dict[str, str]) -> StructuralModel:
    model = StructuralModel()
    for path, text in files.items():
        unit = parse_unit(path, text=text)
        assert unit.error is None, (path, unit.error)
        model.units.append(unit)
        model.classes.extend(unit.classes)
    return resolve(model)


def one_method(src: str):
    model = build_model({"A.java": src})
    return model.resolution_index["A"].methods[0]


class TestCyclomatic:
    def test_empty_body(self):
        assert cyclomatic(one_method("class A { void f() { } }")) == 1

    def test_if_with_and(self):
        m = one_method("class A { void f(int x) { if (x > 0 && x < 9) { } } }")
        assert cyclomatic(m) == 3

    def test_switch_three_cases_plus_default(self):
        src = """
        class A {
            void f(int x) {
                switch (x) {
                    case 1: break;
                    case 2: break;
                    case 3: break;
                    default: break;
                }
            }
        }
        """
        assert cyclomatic(one_method(src)) == 4  # default adds nothing

    def test_bodyless_method_is_one(self):
        model = build_model({"A.java": "abstract class A { abstract void f(); }"})
        assert cyclomatic(model.resolution_index["A"].methods[0]) == 1


class TestClassMetrics:
    def test_lcom_two_methods_no_fields(self):
        src = "class A { void f() { } void g() { } }"
        model = build_model({"A.java": src})
        row = class_metrics(model, model.resolution_index["A"])
        assert row.lcom == 1  # one pair, sharing nothing

    def test_dit_external_superclass(self):
        model = build_model({"A.java": "class A extends android.app.Activity { }"})
        assert class_metrics(model, model.resolution_index["A"]).dit == 2

    def test_isolated_empty_class(self):
        model = build_model({"A.java": "class A { }"})
        row = class_metrics(model, model.resolution_index["A"])
        assert (row.cbo, row.rfc, row.noc) == (0, 0, 0)

    def test_wmc_includes_constructors_and_total_methods(self):
        src = """
        class A {
            A() { }
            public void f(int x) { if (x > 0) { } }
            private void g() { }
        }
        """
        model = build_model({"A.java": src})
        row = class_metrics(model, model.resolution_index["A"])
        assert row.wmc == 4  # 1 + 2 + 1
        assert row.total_methods_qty == 3
        assert row.public_methods_qty + row.private_methods_qty + row.protected_methods_qty + row.default_methods_qty == row.total_methods_qty
        assert row.visible_methods_qty == 2

    def test_wmc_at_least_total_methods(self, synthetic_corpus):
        for app_dir in sorted(synthetic_corpus.iterdir()):
            model = StructuralModel()
            for p in sorted(app_dir.rglob("*.java")):
                u = parse_unit(p, rel_path=p.name)
                model.units.append(u)
                model.classes.extend(u.classes)
            resolve(model)
            for row in all_class_rows(model):
                assert row.wmc >= row.total_methods_qty
                assert row.dit >= 1 and row.loc >= 1


class TestLcomKernel:
    def test_pair_oracle_random(self):
        rng = random.Random(7)
        for _ in range(300):
            m = rng.randint(0, 6)
            uses = [set(rng.sample("abcdef", rng.randint(0, 3))) for _ in range(m)]
            p = q = 0
            for a, b in itertools.combinations(uses, 2):
                if a & b:
                    q += 1
                else:
                    p += 1
            assert lcom_value(uses) == max(0, p - q)


class TestMethodMetrics:
    def test_leaf_method(self):
        src = "class A { void leaf() { int x = 1; } }"
        model = build_model({"A.java": src})
        cls = model.resolution_index["A"]
        row = method_metrics(model, cls, cls.methods[0])
        assert row.fan_out == 0 and row.methods_invoked_indirect_local_qty == 0

    def test_chain_local_and_indirect(self):
        src = "class A { void a() { b(); } void b() { c(); } void c() { } }"
        model = build_model({"A.java": src})
        cls = model.resolution_index["A"]
        rows = {m.name: method_metrics(model, cls, m) for m in cls.methods}
        assert rows["a"].methods_invoked_local_qty == 1
        assert rows["a"].methods_invoked_indirect_local_qty == 1
        assert rows["b"].methods_invoked_indirect_local_qty == 0

    def test_fan_in_three_callers(self):
        src = """
        class A {
            void target() { }
            void c1() { target(); }
            void c2() { target(); }
            void c3() { target(); }
        }
        """
        model = build_model({"A.java": src})
        cls = model.resolution_index["A"]
        row = method_metrics(model, cls, cls.methods[0])
        assert row.fan_in == 3

    def test_constructor_rows_not_emitted(self):
        src = "class A { A() { } void f() { } }"
        model = build_model({"A.java": src})
        rows = all_method_rows(model)
        assert [r.name for r in rows] == ["f"]

    def test_indirect_disjoint_from_direct_and_self(self):
        src = """
        class A {
            void a() { b(); c(); }
            void b() { c(); a(); }
            void c() { }
        }
        """
        model = build_model({"A.java": src})
        cls = model.resolution_index["A"]
        for m in cls.methods:
            row = method_metrics(model, cls, m)
            # reconstruct sets to check the disjointness contract
            mid = m.method_id
            callees = {c for c in model.method_calls.get(mid, []) if c != mid}
            local = {c for c in callees if c[0] == "A"}
            assert row.methods_invoked_indirect_local_qty <= max(0, len(cls.methods) - len(local) - 1)

    def test_fan_conservation(self):
        files = {
            "p/A.java": "package p; class A { void x() { y(); } void y() { } }",
            "p/B.java": "package p; class B { void z(A a) { a.x(); a.y(); } }",
        }
        model = build_model(files)
        rows = all_method_rows(model)
        assert sum(r.fan_in for r in rows) == sum(r.fan_out for r in rows)


class TestReadability:
    def test_formula_zero_point(self):
        assert readability(45.0, 2, 1, 10.0) == 0.5

    def test_simple_method_value(self):
        # z = 0.05*(20-45) + 0.4*(0-2) + 0.3*(log2(2)-1) + 0.05*(5-10) = -2.3
        r = readability(20.0, 0, 1, 5.0)
        assert math.isclose(r, 1.0 / (1.0 + math.exp(-2.3)), rel_tol=1e-12)
        assert math.isclose(r, 0.908877, abs_tol=1e-6)

    def test_strictly_decreasing_in_each_driver(self):
        base = readability(40.0, 1, 2, 8.0)
        assert readability(50.0, 1, 2, 8.0) < base
        assert readability(40.0, 2, 2, 8.0) < base
        assert readability(40.0, 1, 4, 8.0) < base
        assert readability(40.0, 1, 2, 12.0) < base

    def test_always_in_open_unit_interval(self):
        rng = random.Random(3)
        for _ in range(500):
            r = readability(rng.uniform(0, 500), rng.randint(0, 40), rng.randint(1, 200), rng.uniform(1, 60))
            assert 0.0 < r < 1.0
