"""Regenerates table1_sheets.csv: 100 respondents whose marks aggregate to Table 1.

Each (clip, band) cell marks a rotated block of `percent` respondents, so every
respondent has a different mix of marks while the column counts stay exact.
"""

PERCENT = {
    1: [0, 0, 15, 78, 100],
    2: [0, 0, 12, 87, 95],
    3: [0, 0, 5, 97, 100],
    4: [0, 0, 20, 89, 95],
}
PART_TO_BAND = {1: 3, 2: 2, 3: 5, 4: 4, 5: 1}
RESPONDENTS = 100


def main():
    rows = ["subject,clip,part1,part2,part3,part4,part5"]
    for s in range(RESPONDENTS):
        for clip in range(1, 5):
            cells = []
            for part in range(1, 6):
                band = PART_TO_BAND[part]
                count = PERCENT[clip][band - 1]
                slot = (s + 17 * clip + 31 * band) % RESPONDENTS
                cells.append("1" if slot < count else "0")
            rows.append(f"R{s + 1:03d},{clip}," + ",".join(cells))
    with open("table1_sheets.csv", "w", newline="\n") as f:
        f.write("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
