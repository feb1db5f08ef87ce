// Typed client for the authentication service's four JSON endpoints.

export interface WirePlacement {
	cell: number;
	set_id: string;
	element_id: string;
}

export interface ElementInfo {
	element_id: string;
	label: string;
	render_hint: string;
}

export interface SetInfo {
	set_id: string;
	name: string;
	size: number;
	elements: ElementInfo[];
}

export interface ServiceInfo {
	grid: { rows: number; cols: number };
	grid_cells: number;
	k_min: number;
	k_max: number;
	study_mode: boolean;
	shuffle_registration_palettes: boolean;
	entropy_bits: number;
	total_space: string;
	sets: SetInfo[];
}

export interface ChallengeInfo {
	token: string;
	per_set_order: Record<string, string[]>;
	grid: { rows: number; cols: number };
	k_min: number;
	k_max: number;
}

export interface Violation {
	code: string;
	message: string;
}

export type RegisterResult =
	| { kind: "created" }
	| { kind: "invalid"; violations: Violation[] }
	| { kind: "taken" }
	| { kind: "error"; detail: string };

export type LoginResult =
	| { kind: "done"; success: boolean }
	| { kind: "bad_token" }
	| { kind: "error"; detail: string };

async function postJson(url: string, body: unknown): Promise<Response> {
	return fetch(url, {
		method: "POST",
		headers: { "Content-Type": "application/json" },
		body: JSON.stringify(body),
	});
}

export class ApiClient {
	constructor(private readonly baseUrl: string = "") {}

	async fetchConfig(): Promise<ServiceInfo> {
		const response = await fetch(`${this.baseUrl}/api/config`);
		if (!response.ok) {
			throw new Error(`config fetch failed: ${response.status}`);
		}
		return response.json();
	}

	async fetchChallenge(username: string): Promise<ChallengeInfo> {
		const response = await postJson(`${this.baseUrl}/api/challenge`, { username });
		if (!response.ok) {
			throw new Error(`challenge fetch failed: ${response.status}`);
		}
		return response.json();
	}

	async register(username: string, placements: WirePlacement[]): Promise<RegisterResult> {
		const response = await postJson(`${this.baseUrl}/api/register`, {
			username,
			placements,
		});
		if (response.status === 201) {
			return { kind: "created" };
		}
		if (response.status === 409) {
			return { kind: "taken" };
		}
		if (response.status === 400) {
			const body = await response.json().catch(() => null);
			if (body && Array.isArray(body.violations)) {
				return { kind: "invalid", violations: body.violations };
			}
			return { kind: "error", detail: "malformed request" };
		}
		return { kind: "error", detail: `unexpected status ${response.status}` };
	}

	// Sends only the username, token, placements, and timing: never any
	// palette-order information.
	async login(
		username: string,
		token: string,
		placements: WirePlacement[],
		clientDurationSeconds?: number,
	): Promise<LoginResult> {
		const body: Record<string, unknown> = { username, token, placements };
		if (clientDurationSeconds !== undefined) {
			body.client_duration_seconds = clientDurationSeconds;
		}
		const response = await postJson(`${this.baseUrl}/api/login`, body);
		if (response.status === 200) {
			const payload = await response.json();
			return { kind: "done", success: payload.success === true };
		}
		if (response.status === 400) {
			return { kind: "bad_token" };
		}
		return { kind: "error", detail: `unexpected status ${response.status}` };
	}
}
