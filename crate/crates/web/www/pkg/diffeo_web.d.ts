/* tslint:disable */
/* eslint-disable */

/**
 * A finished descent run from an ellipse onto the unit circle.
 */
export class CurveRun {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Interleaved `x0, y0, x1, y1, …` of iterate `k` (clamped).
     */
    iterate(k: number): Float64Array;
    /**
     * Number of accepted steps.
     */
    iterations(): number;
    /**
     * `metric` is `"l2"`, `"h1"` or `"hs"`; `s` is used by `"hs"` only.
     */
    constructor(a: number, b: number, n: number, metric: string, s: number, max_iters: number);
    objectives(): Float64Array;
    target(): Float64Array;
    termination(): string;
}

/**
 * Midpoint refinement of the unit square.
 */
export class MeshLevels {
    free(): void;
    [Symbol.dispose](): void;
    count(): number;
    mesh_sizes(): Float64Array;
    constructor(levels: number);
    /**
     * Corners of every triangle at level `k`, six numbers per face.
     */
    triangles(k: number): Float64Array;
}

/**
 * Holonomy on SO(3) around the square `[x, x + side] × [y, y + side]`.
 *
 * Returns `[curved, predicted, flat]`: the log-norm for the constant
 * connection `L_z dx + L_x dy`, the leading-order prediction
 * `side² ‖[L_z, L_x]‖`, and the log-norm for the flat connection pulled back
 * from `(x, y) ↦ exp(x L_z) exp(xy L_x)`.
 */
export function square_holonomy(x: number, y: number, side: number, steps: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curverun_free: (a: number, b: number) => void;
    readonly __wbg_meshlevels_free: (a: number, b: number) => void;
    readonly curverun_iterate: (a: number, b: number) => [number, number];
    readonly curverun_iterations: (a: number) => number;
    readonly curverun_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly curverun_objectives: (a: number) => [number, number];
    readonly curverun_target: (a: number) => [number, number];
    readonly curverun_termination: (a: number) => [number, number];
    readonly meshlevels_count: (a: number) => number;
    readonly meshlevels_mesh_sizes: (a: number) => [number, number];
    readonly meshlevels_new: (a: number) => [number, number, number];
    readonly meshlevels_triangles: (a: number, b: number) => [number, number];
    readonly square_holonomy: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
