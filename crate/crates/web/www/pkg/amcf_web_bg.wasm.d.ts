/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_flowdemo_free: (a: number, b: number) => void;
export const branch_curve: (a: number, b: number, c: number) => [number, number, number, number];
export const cylinder_multipliers: (a: number, b: number) => [number, number];
export const flowdemo_advance: (a: number, b: number) => number;
export const flowdemo_area: (a: number) => number;
export const flowdemo_g_norm: (a: number) => number;
export const flowdemo_mode_amplitude: (a: number, b: number) => number;
export const flowdemo_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const flowdemo_profile: (a: number) => [number, number];
export const flowdemo_stop_reason: (a: number) => [number, number];
export const flowdemo_time: (a: number) => number;
export const flowdemo_volume: (a: number) => number;
export const flowdemo_volume_drift: (a: number) => number;
export const flowdemo_x: (a: number) => [number, number];
export const unduloid: (a: number, b: number, c: number) => [number, number, number, number];
export const unduloid_h: (a: number, b: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
