// Playback cursor stepping at the clip's own frame rate. Pure logic so
// the animation loop in main.ts stays trivial.

export interface PlayerState {
  cursorS: number;
  playing: boolean;
}

export function step(state: PlayerState, dtS: number,
                     durationS: number): PlayerState {
  if (!state.playing) return state;
  const next = state.cursorS + dtS;
  if (next >= durationS) {
    // stop at the final frame instead of looping
    return { cursorS: durationS, playing: false };
  }
  return { cursorS: next, playing: true };
}

export function togglePlay(state: PlayerState,
                           durationS: number): PlayerState {
  if (state.playing) return { ...state, playing: false };
  const atEnd = state.cursorS >= durationS - 1e-9;
  return { cursorS: atEnd ? 0 : state.cursorS, playing: true };
}
