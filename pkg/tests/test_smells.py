import dataclasses

import pytest

from apppop.javasrc import build_graph, parse_unit, resolve
from apppop.javasrc.model import StructuralModel
from apppop.smells import SMELL_NAMES, SmellConfig, detect_smells


def build_model(files: dict[str, str]) -> StructuralModel:
    model = StructuralModel()
    for path, text in files.items():
        unit = parse_unit(path, text=text)
        assert unit.error is None, (path, unit.error)
        model.units.append(unit)
        model.classes.extend(unit.classes)
    return resolve(model)


def detect(files: dict[str, str], cfg: SmellConfig | None = None):
    model = build_model(files)
    return detect_smells(model, build_graph(model, "class"), cfg)


CLEAN = {"p/A.java": "package p; class A { int f(int limit) { return limit + 1; } }"}


class TestDetectSmells:
    def test_clean_fixture_all_zero(self):
        report = detect(CLEAN)
        assert set(report.counts) == set(SMELL_NAMES)
        assert all(v == 0 for v in report.counts.values())

    def test_long_method_and_param_list(self):
        body = "\n".join("        total = total + 1;" for _ in range(120))
        src = f"""package p;
class A {{
    int total;
    void big(int a, int b, int c, int d, int e, int f, int g) {{
{body}
    }}
}}
"""
        report = detect({"p/A.java": src})
        assert report["LongMethod"] == 1
        assert report["LongParameterList"] == 1

    def test_empty_catch(self):
        src = "package p; class A { void f() { try { f(); } catch (Exception e) { } } }"
        assert detect({"p/A.java": src})["EmptyCatchClause"] == 1

    def test_magic_number_rules(self):
        src = """
        package p;
        class A {
            static final int LIMIT = 99;
            int plain = 31;
            void f() {
                int x = 0;
                x = x + 2;
                x = x * 37;
            }
        }
        """
        report = detect({"p/A.java": src})
        # 31 (non-final field) + 37 (body); 99 excluded (final), 0 and 2 whitelisted
        assert report["MagicNumber"] == 2

    def test_cyclic_dependency_matches_scc_count(self):
        files = {
            "p/A.java": "package p; class A { B b; }",
            "p/B.java": "package p; class B { A a; }",
            "p/C.java": "package p; class C { D d; }",
            "p/D.java": "package p; class D { C c; }",
        }
        assert detect(files)["CyclicDependency"] == 2

    def test_deep_hierarchy_threshold(self):
        files = {"p/H.java": "package p; " + " ".join(
            ["class C0 { }"] + [f"class C{i} extends C{i-1} {{ }}" for i in range(1, 8)]
        )}
        report = detect(files)
        assert report["DeepHierarchy"] == 2  # C6 (DIT 7) and C7 (DIT 8)
        lowered = detect(files, SmellConfig(deep_hierarchy_dit=2))
        assert lowered["DeepHierarchy"] == 6  # C2..C7

    def test_insufficient_modularization_lowered_thresholds(self):
        src = """
        package p;
        class A {
            public void m1() { }
            public void m2() { }
            public void m3() { }
        }
        """
        cfg = SmellConfig(insufficient_modularization_public_methods=2)
        assert detect({"p/A.java": src}, cfg)["InsufficientModularization"] == 1

    def test_god_component_lowered_thresholds(self):
        files = {f"p/C{i}.java": f"package p; class C{i} {{ }}" for i in range(4)}
        cfg = SmellConfig(god_component_classes=3)
        assert detect(files, cfg)["GodComponent"] == 1

    def test_long_statement_and_identifier(self):
        long_name = "a" * 35
        long_line = "        int v = 1 + 1" + " + 1" * 40 + ";"
        src = f"package p;\nclass A {{\n    void f() {{\n        int {long_name} = 0;\n{long_line}\n    }}\n}}\n"
        report = detect({"p/A.java": src})
        assert report["LongIdentifier"] == 1
        assert report["LongStatement"] == 1

    def test_monotonicity_in_thresholds(self):
        src = """
        package p;
        class A {
            void f(int a, int b, int c, int d) {
                if (a > 1 && b > 2 || c > 3) { d = 9; }
            }
        }
        """
        files = {"p/A.java": src}
        strict = detect(files, SmellConfig(complex_method_cc=1, long_param_list=1))
        default = detect(files)
        for name in SMELL_NAMES:
            assert strict[name] >= default[name]

    def test_thresholds_must_be_positive(self):
        with pytest.raises(ValueError):
            SmellConfig(long_method_loc=0).validate()

    def test_config_roundtrips(self):
        cfg = SmellConfig(long_method_loc=50)
        doc = dataclasses.asdict(cfg)
        assert SmellConfig(**doc) == cfg
