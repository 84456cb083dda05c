"""Generate the code reference pages, their navigation and the changelog page."""

from pathlib import Path

import mkdocs_gen_files

root = Path(__file__).parent.parent.parent
src = root / "src"
nav = mkdocs_gen_files.Nav()

for path in sorted(src.rglob("*.py")):
    parts = tuple(path.relative_to(src).with_suffix("").parts)
    doc_path = path.relative_to(src).with_suffix(".md")
    if parts[-1] == "__init__":
        parts = parts[:-1]
        doc_path = doc_path.with_name("index.md")
    if not parts or parts[-1].startswith("_"):
        continue

    nav[parts] = doc_path.as_posix()
    full_doc_path = Path("reference", doc_path)
    with mkdocs_gen_files.open(full_doc_path, "w") as fd:
        fd.write(f"::: {'.'.join(parts)}")
    mkdocs_gen_files.set_edit_path(full_doc_path, path.relative_to(root))

with mkdocs_gen_files.open("reference/SUMMARY.md", "w") as nav_file:
    nav_file.writelines(nav.build_literate_nav())

changelog = root / "CHANGELOG.md"
if changelog.exists():
    with mkdocs_gen_files.open("changelog.md", "w") as fd:
        fd.write(changelog.read_text(encoding="utf-8"))
    mkdocs_gen_files.set_edit_path("changelog.md", changelog.relative_to(root))
