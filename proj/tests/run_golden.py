#!/usr/bin/env python3
"""Golden-file suite: replay each case's command line and byte-compare stdout.

Usage: run_golden.py <linstate-binary> <golden-dir>

A case is a directory under cases/ holding:
  cmd        argv after the binary name, one entry per line
  exit       expected exit code
  expect.txt expected stdout, byte for byte

Commands run with the golden dir as cwd so file arguments stay relative.
"""
import pathlib
import subprocess
import sys


def main():
    if len(sys.argv) != 3:
        print("usage: run_golden.py <linstate-binary> <golden-dir>")
        return 2
    binary = pathlib.Path(sys.argv[1]).resolve()
    root = pathlib.Path(sys.argv[2]).resolve()
    failures = 0
    cases = sorted(p for p in (root / "cases").iterdir() if p.is_dir())
    for case in cases:
        args = (case / "cmd").read_text().splitlines()
        want_exit = int((case / "exit").read_text().strip())
        want_out = (case / "expect.txt").read_bytes()
        run = subprocess.run(
            [str(binary)] + args, cwd=root, capture_output=True, timeout=60
        )
        ok = run.returncode == want_exit and run.stdout == want_out
        print(f"{'pass' if ok else 'FAIL'}  {case.name}")
        if not ok:
            failures += 1
            if run.returncode != want_exit:
                print(f"  exit: want {want_exit}, got {run.returncode}")
            if run.stdout != want_out:
                print(f"  want stdout: {want_out!r}")
                print(f"  got stdout:  {run.stdout!r}")
            if run.stderr:
                print(f"  stderr: {run.stderr.decode(errors='replace')!r}")
    print(f"{len(cases) - failures}/{len(cases)} golden cases pass")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
