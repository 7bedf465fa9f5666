"""Membership oracle for words of even length, speaking the line protocol."""
import sys

for line in sys.stdin:
    line = line.strip()
    if line == "quit":
        break
    n = 0 if line == "_" else len(line.split())
    print(1 if n % 2 == 0 else 0, flush=True)
