// Pure placement state and the local mirror of the server's validation rules.
// Submit stays disabled until this mirror passes, so every locally accepted
// secret is shape-valid on the server too.

import type { WirePlacement } from "./api.js";

export interface Selection {
	setId: string;
	elementId: string;
}

export type Placements = ReadonlyMap<number, Selection>;

export interface PolicyRules {
	rows: number;
	cols: number;
	kMin: number;
	kMax: number;
	setIds: string[];
}

export function emptyPlacements(): Placements {
	return new Map();
}

// Placing on an occupied cell replaces its content.
export function placeElement(
	placements: Placements,
	cell: number,
	selection: Selection,
): Placements {
	const next = new Map(placements);
	next.set(cell, { ...selection });
	return next;
}

export function removeElement(placements: Placements, cell: number): Placements {
	const next = new Map(placements);
	next.delete(cell);
	return next;
}

export interface ValidationState {
	ok: boolean;
	problems: string[];
}

export function validatePlacements(
	placements: Placements,
	rules: PolicyRules,
): ValidationState {
	const problems: string[] = [];
	const cells = rules.rows * rules.cols;
	const k = placements.size;
	if (k < rules.kMin) {
		problems.push(`place at least ${rules.kMin} elements (${k} so far)`);
	}
	if (k > rules.kMax) {
		problems.push(`at most ${rules.kMax} elements allowed (${k} placed)`);
	}
	for (const cell of placements.keys()) {
		if (cell < 0 || cell >= cells) {
			problems.push(`cell ${cell} is outside the grid`);
		}
	}
	const covered = new Set<string>();
	for (const selection of placements.values()) {
		covered.add(selection.setId);
	}
	for (const setId of rules.setIds) {
		if (!covered.has(setId)) {
			problems.push(`pick at least one element from ${setId}`);
		}
	}
	return { ok: problems.length === 0, problems };
}

export function toWire(placements: Placements): WirePlacement[] {
	return [...placements.entries()]
		.sort(([a], [b]) => a - b)
		.map(([cell, selection]) => ({
			cell,
			set_id: selection.setId,
			element_id: selection.elementId,
		}));
}
