"""Acceptance line for the figures component."""

import pytest

from pxpfigures import MissingColumnError, PanelSpec, TARGET_SCHEMAS, render


def test_criterion_13_figures(csv_dirs, tmp_path):
    ok = True
    for target in sorted(TARGET_SCHEMAS):
        written = render(PanelSpec(target=target, data_dir=csv_dirs[target],
                                   out_stem=tmp_path / target))
        ok &= all(path.exists() for path in written)

    # a truncated CSV must fail with the missing column named
    src = csv_dirs["q-scan"] / "q-fits.csv"
    broken = tmp_path / "broken"
    broken.mkdir()
    lines = src.read_text().splitlines()
    drop = lines[0].split(",").index("q")
    with open(broken / "q-fits.csv", "w") as stream:
        for line in lines:
            cells = line.split(",")
            del cells[drop]
            stream.write(",".join(cells) + "\n")
    (broken / "q-betas.csv").write_text(
        (csv_dirs["q-scan"] / "q-betas.csv").read_text())
    diagnostic = ""
    try:
        render(PanelSpec(target="q-scan", data_dir=broken,
                         out_stem=broken / "panel"))
        ok = False
    except MissingColumnError as exc:
        diagnostic = str(exc)
        ok &= "'q'" in diagnostic
    tag = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE 13 figure rendering: {tag} ({diagnostic})")
    assert ok
