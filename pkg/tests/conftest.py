import shutil
import subprocess
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixture_cache() -> Path:
    path = FIXTURES / "cache"
    if not (path / "acme__chipsoc" / "issues.jsonl").is_file():
        pytest.skip("fixture cache not generated; run fixtures/gen_fixture.py")
    return path


@pytest.fixture(scope="session")
def fixture_annotations() -> Path:
    return FIXTURES / "annotations.csv"


def _git(repo: Path, *args: str) -> str:
    return subprocess.run(
        ["git", "-C", str(repo), *args], capture_output=True, text=True, check=True
    ).stdout


@pytest.fixture(scope="session")
def synthetic_repo(tmp_path_factory) -> Path:
    """Ten deterministic commits mixing file adds, edits and deletions."""
    repo = tmp_path_factory.mktemp("synthrepo")
    subprocess.run(["git", "init", "-q", str(repo)], check=True)
    _git(repo, "config", "user.email", "test@example.com")
    _git(repo, "config", "user.name", "Test")

    def commit(message: str) -> None:
        _git(repo, "add", "-A")
        _git(
            repo, "-c", "commit.gpgsign=false", "commit", "-q", "-m", message,
            "--date", "2021-01-01T00:00:00Z",
        )

    def write(name: str, lines: list[str]) -> None:
        (repo / name).write_text("".join(f"{ln}\n" for ln in lines), encoding="utf-8")

    write("a.sv", [f"a line {i}" for i in range(12)])
    commit("initial rtl")
    write("b.sv", [f"b line {i}" for i in range(8)])
    commit("add second unit")
    write("a.sv", [f"a line {i}" for i in range(12) if i % 3] + ["a tail 1", "a tail 2"])
    commit("rework reset handling\n\nFixes #3")
    write("c.v", [f"c line {i}" for i in range(5)])
    write("b.sv", [f"b line {i}" for i in range(8)] + ["b extra"])
    commit("wire through enable")
    (repo / "c.v").unlink()
    commit("drop legacy shim")
    write("a.sv", ["a rewritten 0", "a rewritten 1", "a rewritten 2"])
    commit("simplify datapath, closes #7")
    write("d.svh", [f"d line {i}" for i in range(20)])
    commit("add shared header")
    write("d.svh", [f"d line {i}" for i in range(20) if i != 4] + ["d appended"])
    write("b.sv", ["b only"])
    commit("trim header and unit")
    write("e.sv", ["e 0", "e 1"])
    commit("resolved #3 differently")
    write("e.sv", ["e 0", "e mid", "e 1", "e 2"])
    commit("final touches")
    return repo


@pytest.fixture()
def out_dir(tmp_path) -> Path:
    return tmp_path / "out"


@pytest.fixture(scope="session")
def git_available() -> bool:
    return shutil.which("git") is not None
