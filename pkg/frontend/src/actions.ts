/** The flat action space over composite moves.
 *
 * The server enumerates moves in a canonical order it promises never to
 * change: direction (left, up, right, down), then primitive-sequence
 * length 1..maxOptLen, then lexicographic over primitive values 0..3.
 * This module reproduces that enumeration so an integer index is a
 * complete action for RL toolkits that want a flat discrete space.
 */

import { DIRECTIONS, type DirectionName } from "./panel.js";

export interface Move {
  direction: DirectionName;
  primitives: number[];
}

export function displacement(move: Move): number {
  return move.primitives.reduce((total, p) => total + p, 0);
}

function moveKey(direction: DirectionName, primitives: readonly number[]): string {
  return `${direction}:${primitives.join(",")}`;
}

/** All distinct moves with 1..maxOptLen primitives, in canonical order. */
export function moveTable(maxOptLen: number): Move[] {
  if (maxOptLen < 1) {
    throw new Error(`maxOptLen must be >= 1, got ${maxOptLen}`);
  }
  const moves: Move[] = [];
  for (const direction of DIRECTIONS) {
    for (let length = 1; length <= maxOptLen; length++) {
      const primitives = new Array<number>(length).fill(0);
      while (true) {
        moves.push({ direction, primitives: [...primitives] });
        let digit = length - 1;
        while (digit >= 0 && primitives[digit] === 3) {
          primitives[digit] = 0;
          digit--;
        }
        if (digit < 0) break;
        primitives[digit]++;
      }
    }
  }
  return moves;
}

/** Bidirectional map between moves and their flat indices. */
export class ActionSpace {
  readonly moves: readonly Move[];
  private readonly indexOf: Map<string, number>;

  constructor(maxOptLen: number) {
    this.moves = moveTable(maxOptLen);
    this.indexOf = new Map(
      this.moves.map((move, i) => [moveKey(move.direction, move.primitives), i]),
    );
  }

  get n(): number {
    return this.moves.length;
  }

  decode(index: number): Move {
    if (!Number.isInteger(index) || index < 0 || index >= this.moves.length) {
      throw new Error(`action index ${index} is outside 0..${this.moves.length - 1}`);
    }
    return this.moves[index];
  }

  encode(move: Move): number {
    const index = this.indexOf.get(moveKey(move.direction, move.primitives));
    if (index === undefined) {
      throw new Error(`move ${JSON.stringify(move)} is not in the lexicon`);
    }
    return index;
  }
}
