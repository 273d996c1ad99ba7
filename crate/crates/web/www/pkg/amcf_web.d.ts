/* tslint:disable */
/* eslint-disable */

export class FlowDemo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Takes up to `steps` steps; returns false once the flow has stopped.
     */
    advance(steps: number): boolean;
    area(): number;
    g_norm(): number;
    /**
     * Amplitude `2|r̂(k)|` of mode `k`.
     */
    mode_amplitude(k: number): number;
    /**
     * `r_star + amp cos(mode x)` on `n` points, stepped semi-implicitly with `dt`.
     */
    constructor(r_star: number, mode: number, amp: number, n: number, dt: number);
    profile(): Float64Array;
    stop_reason(): string | undefined;
    time(): number;
    volume(): number;
    volume_drift(): number;
    x(): Float64Array;
}

/**
 * Branch `ℓ` as interleaved pairs `[s0, λ0, s1, λ1, ...]`.
 */
export function branch_curve(ell: number, s_max: number, steps: number): Float64Array;

/**
 * `r⋆⁻² - k²` for `k = 1..=k_max`.
 */
export function cylinder_multipliers(r_star: number, k_max: number): Float64Array;

/**
 * Unduloid samples on `n` points.
 */
export function unduloid(b: number, k: number, n: number): Float64Array;

/**
 * Kenmotsu mean-curvature parameter `H = k I(B) / π`.
 */
export function unduloid_h(b: number, k: number): number;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_flowdemo_free: (a: number, b: number) => void;
    readonly branch_curve: (a: number, b: number, c: number) => [number, number, number, number];
    readonly cylinder_multipliers: (a: number, b: number) => [number, number];
    readonly flowdemo_advance: (a: number, b: number) => number;
    readonly flowdemo_area: (a: number) => number;
    readonly flowdemo_g_norm: (a: number) => number;
    readonly flowdemo_mode_amplitude: (a: number, b: number) => number;
    readonly flowdemo_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly flowdemo_profile: (a: number) => [number, number];
    readonly flowdemo_stop_reason: (a: number) => [number, number];
    readonly flowdemo_time: (a: number) => number;
    readonly flowdemo_volume: (a: number) => number;
    readonly flowdemo_volume_drift: (a: number) => number;
    readonly flowdemo_x: (a: number) => [number, number];
    readonly unduloid: (a: number, b: number, c: number) => [number, number, number, number];
    readonly unduloid_h: (a: number, b: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
