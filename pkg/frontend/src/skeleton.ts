// 2-D orthographic (front view) projection of a skeleton frame: world x
// maps to screen x, world y to screen up; z is dropped.

export interface Projected {
  points: { joint: string; x: number; y: number }[];
  bones: [number, number][]; // index pairs into points
}

const PARENTS: Record<string, string> = {
  neck: "spine",
  head: "neck",
  l_shoulder: "neck",
  l_elbow: "l_shoulder",
  l_wrist: "l_elbow",
  r_shoulder: "neck",
  r_elbow: "r_shoulder",
  r_wrist: "r_elbow",
};

export interface Viewport {
  widthPx: number;
  heightPx: number;
  // world-space window
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

export function fitViewport(frames: number[][][], widthPx: number,
                            heightPx: number, margin = 0.1): Viewport {
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const frame of frames) {
    for (const [x, y] of frame) {
      if (x < xMin) xMin = x;
      if (x > xMax) xMax = x;
      if (y < yMin) yMin = y;
      if (y > yMax) yMax = y;
    }
  }
  const padX = (xMax - xMin || 1) * margin;
  const padY = (yMax - yMin || 1) * margin;
  return { widthPx, heightPx, xMin: xMin - padX, xMax: xMax + padX,
           yMin: yMin - padY, yMax: yMax + padY };
}

export function projectFrame(joints: string[], frame: number[][],
                             view: Viewport): Projected {
  const sx = view.widthPx / (view.xMax - view.xMin);
  const sy = view.heightPx / (view.yMax - view.yMin);
  const scale = Math.min(sx, sy); // uniform, no distortion
  const cx = (view.xMin + view.xMax) / 2;
  const cy = (view.yMin + view.yMax) / 2;
  const points = joints.map((joint, j) => ({
    joint,
    x: view.widthPx / 2 + (frame[j][0] - cx) * scale,
    y: view.heightPx / 2 - (frame[j][1] - cy) * scale, // screen y is down
  }));
  const indexOf = new Map(joints.map((name, i) => [name, i]));
  const bones: [number, number][] = [];
  for (const [child, parent] of Object.entries(PARENTS)) {
    const a = indexOf.get(child);
    const b = indexOf.get(parent);
    if (a !== undefined && b !== undefined) bones.push([a, b]);
  }
  return { points, bones };
}
