/** Symbolic panel decoding.
 *
 * A symbolic observation arrives as a flat row-major list of 11 one-hot
 * rows: slots 0-3 are wall digits (left, up, right, down), 4-7 crossing
 * digits, 8-9 the signed goal offsets, 10 the hint. Numeric slots one-hot
 * their value at column value + 9; the hint slot uses the first four
 * columns. Index-augmented streams append an 11-wide identity block that
 * decoding ignores.
 */

export type DirectionName = "left" | "up" | "right" | "down";
export type HintName = "circle" | "triangle" | "square" | "pentagon";

export const DIRECTIONS: readonly DirectionName[] = ["left", "up", "right", "down"];
export const HINTS: readonly HintName[] = ["circle", "triangle", "square", "pentagon"];

export const SYMBOLIC_SLOTS = 11;
export const SYMBOLIC_CATEGORIES = 19;

/** Panel content in the dict shape episode logs use. */
export interface PanelDict {
  wall: Partial<Record<DirectionName, number>>;
  crossing: Partial<Record<DirectionName, number>>;
  goal: [number, number];
  hint: HintName | null;
}

/** Reshape a flat symbolic payload into its 11 rows. */
export function symbolicRows(flat: readonly number[]): number[][] {
  if (flat.length === 0 || flat.length % SYMBOLIC_SLOTS !== 0) {
    throw new Error(`symbolic payload of length ${flat.length} is not 11 rows`);
  }
  const width = flat.length / SYMBOLIC_SLOTS;
  const rows: number[][] = [];
  for (let r = 0; r < SYMBOLIC_SLOTS; r++) {
    rows.push(flat.slice(r * width, (r + 1) * width) as number[]);
  }
  return rows;
}

function hotColumn(row: readonly number[], slot: number): number | null {
  let hot: number | null = null;
  for (let c = 0; c < row.length; c++) {
    if (row[c] === 0) continue;
    if (row[c] !== 1 || hot !== null) {
      throw new Error(`slot ${slot} is not one-hot`);
    }
    hot = c;
  }
  return hot;
}

/** Invert the symbolic encoding (augmented input accepted). */
export function decodePanel(flat: readonly number[]): PanelDict {
  const rows = symbolicRows(flat);
  const width = rows[0].length;
  if (width !== SYMBOLIC_CATEGORIES && width !== SYMBOLIC_CATEGORIES + SYMBOLIC_SLOTS) {
    throw new Error(`expected 19 or 30 categories per slot, got ${width}`);
  }
  const wall: PanelDict["wall"] = {};
  const crossing: PanelDict["crossing"] = {};
  const goal: [number, number] = [0, 0];
  let hint: HintName | null = null;
  for (let slot = 0; slot < SYMBOLIC_SLOTS; slot++) {
    const col = hotColumn(rows[slot].slice(0, SYMBOLIC_CATEGORIES), slot);
    if (col === null) continue;
    if (slot < 4) {
      wall[DIRECTIONS[slot]] = col - 9;
    } else if (slot < 8) {
      crossing[DIRECTIONS[slot - 4]] = col - 9;
    } else if (slot === 8) {
      goal[0] = col - 9;
    } else if (slot === 9) {
      goal[1] = col - 9;
    } else {
      if (col >= HINTS.length) {
        throw new Error(`hint slot uses category ${col}, outside the first 4`);
      }
      hint = HINTS[col];
    }
  }
  return { wall, crossing, goal, hint };
}
