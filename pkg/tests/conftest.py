"""Shared fixtures: the hand-written fixture app and a synthetic Java corpus."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

FIXTURE_APP = Path(__file__).parent / "data" / "fixture_app"


@pytest.fixture
def fixture_app_dir() -> Path:
    return FIXTURE_APP


def _app_java_sources(pkg: str, i: int) -> dict[str, str]:
    """Six small classes with metric profiles that vary by app index."""
    loops = "\n".join(
        f"            for (int k{j} = 0; k{j} < n; k{j} = k{j} + 1) {{ total = total + k{j}; }}"
        for j in range(i + 1)
    )
    extra_methods = "\n".join(
        f"    int helper{j}(int x) {{ return x + {j + 3}; }}" for j in range(i + 2)
    )
    return {
        "Core.java": f"""package {pkg};

public class Core {{
    private int total;

    int work(int n) {{
        if (n > {10 + i}) {{
            total = total + n;
        }}
{loops}
        return total;
    }}

{extra_methods}
}}
""",
        "Util.java": f"""package {pkg};

public class Util {{
    static String tag(String s) {{
        return "[" + s + "]";
    }}
}}
""",
        "Model.java": f"""package {pkg};

public class Model extends Core {{
    String name;

    String describe() {{
        return Util.tag(name);
    }}
}}
""",
        "Screen.java": f"""package {pkg};

public class Screen {{
    Model current;

    void refresh() {{
        current.describe();
    }}
}}
""",
        "Store.java": f"""package {pkg};

public class Store {{
    private Model[] slots;

    int capacity() {{
        return {17 * (i + 1)};
    }}
}}
""",
        "Extra.java": f"""package {pkg};

public class Extra {{
    double ratio(double a, double b) {{
        return b == 0 ? 0 : a / b;
    }}
}}
""",
    }


def make_synthetic_corpus(root: Path, n_apps: int = 6) -> Path:
    """Write a deterministic corpus of small Java apps for pipeline tests."""
    root.mkdir(parents=True, exist_ok=True)
    stars_cycle = [[5, 5, 4], [2, 1, 2], [4, 3, 4], [1, 2, 3], [5, 4, 5], [3, 3, 2], [4, 5], [2, 2]]
    for i in range(n_apps):
        pkg = f"org.sample.app{i}"
        app_dir = root / f"app{i}"
        src = app_dir / "src" / pkg.replace(".", "/")
        src.mkdir(parents=True, exist_ok=True)
        for name, text in _app_java_sources(pkg, i).items():
            (src / name).write_text(text, encoding="utf-8")
        activities = "\n".join(
            f'        <activity android:name=".A{j}"/>' for j in range(1 + i % 3)
        )
        (app_dir / "AndroidManifest.xml").write_text(
            f"""<?xml version="1.0" encoding="utf-8"?>
<manifest xmlns:android="http://schemas.android.com/apk/res/android" package="{pkg}">
    <application>
{activities}
    </application>
</manifest>
""",
            encoding="utf-8",
        )
        reviews = [{"stars": s} for s in stars_cycle[i % len(stars_cycle)]]
        meta = {
            "package_name": pkg,
            "genre": ["TOOLS", "GAME_PUZZLE", "FINANCE"][i % 3],
            "contains_ads": i % 2 == 0,
            "permissions": [["Camera"], ["Contacts", "Location"], []][i % 3],
            "release_date": f"20{18 + i % 3}-03-0{1 + i % 9}",
            "snapshot_date": "2024-03-01",
            "install_count": 1200 * (i + 1) + 37 * i,
            "reviews": reviews,
        }
        (app_dir / "app.json").write_text(json.dumps(meta, indent=2), encoding="utf-8")
    return root


@pytest.fixture
def synthetic_corpus(tmp_path: Path) -> Path:
    return make_synthetic_corpus(tmp_path / "corpus")
