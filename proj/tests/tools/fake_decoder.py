#!/usr/bin/env python3
"""Stand-in for the frame decoder in tests.

Understands just enough of the ffmpeg argument set the extractor emits:
-ss START -t LENGTH -i SOURCE -vf fps=RATE,... OUTPUT_PATTERN. Writes
max(1, floor(LENGTH * RATE)) tiny JPEG files matching the pattern. A source
path containing "explode" makes the decoder fail, for error-path tests.
"""

import math
import sys
from fractions import Fraction

# Smallest payload the extractor will happily read back; content is irrelevant.
JPEG_STUB = b"\xff\xd8\xff\xe0FAKEJPEG\xff\xd9"


def main(argv):
    args = argv[1:]
    values = {}
    positional = []
    i = 0
    while i < len(args):
        if args[i].startswith("-") and not args[i].lstrip("-").replace(".", "").isdigit():
            if i + 1 < len(args) and not args[i + 1].startswith("-"):
                values[args[i]] = args[i + 1]
                i += 2
            else:
                values[args[i]] = ""
                i += 1
        else:
            positional.append(args[i])
            i += 1

    source = values.get("-i", "")
    if "explode" in source:
        print("fake decoder: refusing to open " + source, file=sys.stderr)
        return 1

    length = int(values["-t"])
    vf = values.get("-vf", "fps=1")
    rate_text = vf.split(",")[0].split("=", 1)[1]
    rate = Fraction(rate_text)
    count = max(1, math.floor(length * rate))

    pattern = positional[-1]
    for n in range(1, count + 1):
        with open(pattern % n if "%" in pattern else pattern, "wb") as f:
            f.write(JPEG_STUB + str(n).encode())
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
